#include "lhdl/harness/report.hpp"
#include "lhdl/core/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace lhdl {

void ensure_dir(const std::string& dir)
{
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
    f << text;
}

std::string render_manifest(const Config& resolved, const std::string& command, uint64_t seed)
{
    Config c = resolved;
    c.set("run", "command", ConfigValue::string(command));
    c.set("run", "seed", ConfigValue::number(double(seed)));
    c.set("run", "version", ConfigValue::string(kVersion));
    return c.render();
}

void write_manifest(const std::string& dir, const Config& resolved, const std::string& command, uint64_t seed)
{
    ensure_dir(dir);
    write_text(dir + "/manifest.cfg", render_manifest(resolved, command, seed));
}

std::string render_summary(const std::string& title, const std::vector<SummaryLine>& lines)
{
    std::ostringstream os;
    os << title << "\n";
    for (const auto& l : lines) os << "  [" << (l.pass ? "ok" : "FAIL") << "] " << l.name << ": " << l.detail << "\n";
    return os.str();
}

} // namespace lhdl
