#pragma once

#include <istream>
#include <string>
#include <vector>

#include "rcv/sample.hpp"

namespace rcv {

/// Reads one numeric value per line. Blank lines are skipped; with
/// `has_header` the first non-blank line is skipped. Leading and trailing
/// whitespace are ignored.
/// Throws DataError naming the 1-based line of the first malformed value.
[[nodiscard]] std::vector<double> read_column(std::istream& in, bool has_header = false);
[[nodiscard]] std::vector<double> read_column_file(const std::string& path,
                                                   bool has_header = false);
[[nodiscard]] Sample read_sample_file(const std::string& path, bool has_header = false);

}  // namespace rcv
