#include "lhdl/core/config.hpp"
#include "lhdl/core/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lhdl {

ConfigValue ConfigValue::number(double v) { ConfigValue c; c.type = Type::Number; c.num = v; return c; }
ConfigValue ConfigValue::string(std::string v) { ConfigValue c; c.type = Type::String; c.str = std::move(v); return c; }
ConfigValue ConfigValue::boolean(bool v) { ConfigValue c; c.type = Type::Bool; c.flag = v; return c; }
ConfigValue ConfigValue::array(std::vector<ConfigValue> v) { ConfigValue c; c.type = Type::Array; c.items = std::move(v); return c; }

double ConfigValue::as_number() const
{
    if (type == Type::Number) return num;
    if (type == Type::Bool) return flag ? 1.0 : 0.0;
    throw Error(ErrorKind::Config, "expected a number, got " + render());
}

const std::string& ConfigValue::as_string() const
{
    if (type != Type::String) throw Error(ErrorKind::Config, "expected a string, got " + render());
    return str;
}

bool ConfigValue::as_bool() const
{
    if (type == Type::Bool) return flag;
    if (type == Type::Number) return num != 0.0;
    throw Error(ErrorKind::Config, "expected a boolean, got " + render());
}

std::vector<double> ConfigValue::as_numbers() const
{
    if (type != Type::Array) return {as_number()};
    std::vector<double> out;
    for (auto& it : items) out.push_back(it.as_number());
    return out;
}

std::vector<std::string> ConfigValue::as_strings() const
{
    if (type != Type::Array) return {as_string()};
    std::vector<std::string> out;
    for (auto& it : items) out.push_back(it.as_string());
    return out;
}

static std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string ConfigValue::render() const
{
    switch (type) {
    case Type::Number: {
        char buf[64];
        if (std::floor(num) == num && std::fabs(num) < 1e15)
            std::snprintf(buf, sizeof buf, "%.0f", num);
        else
            std::snprintf(buf, sizeof buf, "%.17g", num);
        return buf;
    }
    case Type::String: return quote(str);
    case Type::Bool: return flag ? "true" : "false";
    case Type::Array: {
        std::string out = "[";
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += items[i].render();
        }
        return out + "]";
    }
    }
    return "";
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    int line = 1;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::Config, "line " + std::to_string(line) + ": " + msg);
    }
    void skip_ws()
    {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    }
    bool at_end_of_line()
    {
        skip_ws();
        return i >= s.size() || s[i] == '\n' || s[i] == '#';
    }
    std::string quoted()
    {
        // assumes s[i]=='"'
        ++i;
        std::string out;
        while (i < s.size() && s[i] != '"') {
            if (s[i] == '\n') fail("unterminated string");
            if (s[i] == '\\' && i + 1 < s.size()) ++i;
            out += s[i++];
        }
        if (i >= s.size()) fail("unterminated string");
        ++i;
        return out;
    }
    std::string bare()
    {
        size_t b = i;
        while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_' || s[i] == '-' ||
                                s[i] == '.' || s[i] == '+' || s[i] == ':'))
            ++i;
        if (b == i) fail("expected an identifier");
        return s.substr(b, i - b);
    }
    ConfigValue value()
    {
        skip_ws();
        if (i >= s.size()) fail("missing value");
        if (s[i] == '"') return ConfigValue::string(quoted());
        if (s[i] == '[') {
            ++i;
            std::vector<ConfigValue> items;
            for (;;) {
                while (i < s.size() && std::isspace((unsigned char)s[i])) {
                    if (s[i] == '\n') ++line;
                    ++i;
                }
                if (i < s.size() && s[i] == ']') { ++i; break; }
                items.push_back(value());
                while (i < s.size() && std::isspace((unsigned char)s[i])) {
                    if (s[i] == '\n') ++line;
                    ++i;
                }
                if (i < s.size() && s[i] == ',') { ++i; continue; }
                if (i < s.size() && s[i] == ']') { ++i; break; }
                fail("expected ',' or ']' in array");
            }
            return ConfigValue::array(std::move(items));
        }
        std::string tok = bare();
        if (tok == "true") return ConfigValue::boolean(true);
        if (tok == "false") return ConfigValue::boolean(false);
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') fail("bad value '" + tok + "' (strings must be quoted)");
        return ConfigValue::number(v);
    }
};

} // namespace

Config Config::parse(const std::string& text)
{
    Config cfg;
    Cursor c{text};
    std::string section;
    while (c.i < text.size()) {
        c.skip_ws();
        if (c.i >= text.size()) break;
        char ch = text[c.i];
        if (ch == '\n') { ++c.line; ++c.i; continue; }
        if (ch == '#') {
            while (c.i < text.size() && text[c.i] != '\n') ++c.i;
            continue;
        }
        if (ch == '[') {
            ++c.i;
            c.skip_ws();
            section = c.bare();
            c.skip_ws();
            if (c.i >= text.size() || text[c.i] != ']') c.fail("expected ']'");
            ++c.i;
            cfg.data_[section];
            if (!c.at_end_of_line()) c.fail("trailing text after section header");
            continue;
        }
        std::string key = (ch == '"') ? c.quoted() : c.bare();
        c.skip_ws();
        if (c.i >= text.size() || text[c.i] != '=') c.fail("expected '=' after key '" + key + "'");
        ++c.i;
        ConfigValue v = c.value();
        if (!c.at_end_of_line()) c.fail("trailing text after value");
        auto& sec = cfg.data_[section];
        if (sec.count(key)) c.fail("duplicate key '" + key + "'");
        sec[key] = std::move(v);
    }
    return cfg;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool Config::has(const std::string& sec, const std::string& key) const
{
    auto it = data_.find(sec);
    return it != data_.end() && it->second.count(key);
}

bool Config::has_section(const std::string& sec) const { return data_.count(sec) != 0; }

const ConfigValue& Config::at(const std::string& sec, const std::string& key) const
{
    auto it = data_.find(sec);
    if (it == data_.end() || !it->second.count(key))
        throw Error(ErrorKind::Config, "missing key [" + sec + "] " + key);
    return it->second.at(key);
}

const Config::Section& Config::section(const std::string& name) const
{
    static const Section empty;
    auto it = data_.find(name);
    return it == data_.end() ? empty : it->second;
}

double Config::number(const std::string& sec, const std::string& key, double dflt) const
{
    return has(sec, key) ? at(sec, key).as_number() : dflt;
}

long Config::integer(const std::string& sec, const std::string& key, long dflt) const
{
    if (!has(sec, key)) return dflt;
    double v = at(sec, key).as_number();
    if (std::floor(v) != v) throw Error(ErrorKind::Config, "[" + sec + "] " + key + " must be an integer");
    return (long)v;
}

std::string Config::string(const std::string& sec, const std::string& key, const std::string& dflt) const
{
    return has(sec, key) ? at(sec, key).as_string() : dflt;
}

bool Config::boolean(const std::string& sec, const std::string& key, bool dflt) const
{
    return has(sec, key) ? at(sec, key).as_bool() : dflt;
}

std::vector<double> Config::numbers(const std::string& sec, const std::string& key,
                                    const std::vector<double>& dflt) const
{
    return has(sec, key) ? at(sec, key).as_numbers() : dflt;
}

void Config::set(const std::string& sec, const std::string& key, ConfigValue v) { data_[sec][key] = std::move(v); }

void Config::set_default(const std::string& sec, const std::string& key, ConfigValue v)
{
    if (!has(sec, key)) data_[sec][key] = std::move(v);
}

void Config::reject_unknown(const std::map<std::string, std::set<std::string>>& allowed) const
{
    std::string bad;
    for (auto& [sec, kv] : data_) {
        const std::set<std::string>* keys = nullptr;
        auto it = allowed.find(sec);
        if (it != allowed.end()) keys = &it->second;
        else {
            for (auto& [pat, ks] : allowed)
                if (!pat.empty() && pat.back() == '*' && sec.rfind(pat.substr(0, pat.size() - 1), 0) == 0)
                    keys = &ks;
        }
        if (!keys) {
            bad += " [" + sec + "]";
            continue;
        }
        if (keys->count("*")) continue;
        for (auto& [k, v] : kv)
            if (!keys->count(k)) bad += " [" + sec + "]." + k;
    }
    if (!bad.empty()) throw Error(ErrorKind::Config, "unknown config entries:" + bad);
}

std::string Config::render() const
{
    std::string out;
    for (auto& [sec, kv] : data_) {
        if (!sec.empty()) out += "[" + sec + "]\n";
        for (auto& [k, v] : kv) {
            bool bare = !k.empty();
            for (char ch : k)
                if (!(std::isalnum((unsigned char)ch) || ch == '_' || ch == '-' || ch == '.')) bare = false;
            out += (bare ? k : quote(k)) + " = " + v.render() + "\n";
        }
        out += "\n";
    }
    return out;
}

} // namespace lhdl
