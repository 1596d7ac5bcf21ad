#pragma once
#include <fstream>
#include <string>
#include <vector>

namespace lhdl {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row(const std::vector<double>& values, const std::string& trailing);
    bool ok() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
    size_t width_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

std::string format_double(double v);

} // namespace lhdl
