#pragma once

#include <string>
#include <vector>

namespace taea {

// Shortest decimal representation that round-trips the exact double.
std::string fmt_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

} // namespace taea
