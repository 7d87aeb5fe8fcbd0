#include "invscat/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "invscat/errors.hpp"

namespace invscat::csv {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view field, std::size_t line) {
  const std::string text = trim(field);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw CsvError(line, "line " + std::to_string(line) + ": cannot parse number '" +
                             text + "'");
  }
  return value;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  Table table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(t);
    if (table.header.empty()) {
      for (auto f : fields) table.header.push_back(trim(f));
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw CsvError(number, "line " + std::to_string(number) + ": expected " +
                                 std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    std::vector<double> row;
    for (auto f : fields) row.push_back(parse_number(f, number));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ValidationError(path.string() + ": missing header");
  return table;
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw ValidationError("write_table: header/column count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << format_number(columns[c].at(r));
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path.string());
}

}  // namespace invscat::csv
