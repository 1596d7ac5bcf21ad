#include "lhdl/core/csv.hpp"
#include "lhdl/core/errors.hpp"

#include <cstdio>
#include <sstream>

namespace lhdl {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size())
{
    if (!out_) throw Error(ErrorKind::Io, "cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values)
{
    for (size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values, const std::string& trailing)
{
    for (size_t i = 0; i < values.size(); ++i) out_ << format_double(values[i]) << ",";
    out_ << trailing << "\n";
}

int CsvTable::column(const std::string& name) const
{
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return (int)i;
    return -1;
}

static std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    CsvTable t;
    std::string line;
    if (std::getline(in, line)) t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

} // namespace lhdl
