#pragma once
// Small helpers shared by the experiment drivers: run manifests, text
// summaries and output directories.
#include "lhdl/core/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lhdl {

inline constexpr const char* kVersion = "0.3.0";

// Creates dir (and parents) if missing; Io error otherwise.
void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& text);

// Resolved config plus [run] seed, command, version.  Loading the file back
// with Config::load and dropping [run] gives the config that was used.
std::string render_manifest(const Config& resolved, const std::string& command, uint64_t seed);
void write_manifest(const std::string& dir, const Config& resolved, const std::string& command, uint64_t seed);

struct SummaryLine {
    std::string name;
    bool pass = false;
    std::string detail;
};
std::string render_summary(const std::string& title, const std::vector<SummaryLine>& lines);

} // namespace lhdl
