#pragma once
// Flat sectioned key/value text config:
//   [section] or [section.sub]
//   key = 1.5 | "text" | true | [1, 2, 3]
// Keys may be quoted to carry punctuation.  '#' starts a comment.
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lhdl {

struct ConfigValue {
    enum class Type { Number, String, Bool, Array };
    Type type = Type::Number;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<ConfigValue> items;

    static ConfigValue number(double v);
    static ConfigValue string(std::string v);
    static ConfigValue boolean(bool v);
    static ConfigValue array(std::vector<ConfigValue> v);

    double as_number() const;
    const std::string& as_string() const;
    bool as_bool() const;
    std::vector<double> as_numbers() const;
    std::vector<std::string> as_strings() const;
    std::string render() const;
};

class Config {
public:
    using Section = std::map<std::string, ConfigValue>;

    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    const ConfigValue& at(const std::string& section, const std::string& key) const;
    const Section& section(const std::string& name) const;

    double number(const std::string& sec, const std::string& key, double dflt) const;
    long integer(const std::string& sec, const std::string& key, long dflt) const;
    std::string string(const std::string& sec, const std::string& key, const std::string& dflt) const;
    bool boolean(const std::string& sec, const std::string& key, bool dflt) const;
    std::vector<double> numbers(const std::string& sec, const std::string& key,
                                const std::vector<double>& dflt) const;

    void set(const std::string& sec, const std::string& key, ConfigValue v);
    // Only fills the key if absent.
    void set_default(const std::string& sec, const std::string& key, ConfigValue v);

    // Throws Config error naming every section/key not listed.  A listed
    // section name ending in '*' matches any section with that prefix.
    void reject_unknown(const std::map<std::string, std::set<std::string>>& allowed) const;

    std::string render() const;
    const std::map<std::string, Section>& sections() const { return data_; }

private:
    std::map<std::string, Section> data_;
};

} // namespace lhdl
