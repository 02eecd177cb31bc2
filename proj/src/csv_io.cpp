#include "rcv/csv_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "rcv/errors.hpp"

namespace rcv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> read_column(std::istream& in, bool has_header) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw DataError("line " + std::to_string(line_no) + ": not a finite number: '" +
                      std::string(field) + "'");
    }
    values.push_back(v);
  }
  return values;
}

std::vector<double> read_column_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_column(in, has_header);
}

Sample read_sample_file(const std::string& path, bool has_header) {
  return Sample(read_column_file(path, has_header));
}

}  // namespace rcv
