#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace invscat::csv {

// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_number(double x);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Strict parse of a whole field; throws CsvError naming the line.
double parse_number(std::string_view field, std::size_t line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Headered numeric CSV. Blank lines and lines starting with '#' are skipped.
Table read_table(const std::filesystem::path& path);

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

std::string trim(std::string_view s);

}  // namespace invscat::csv
