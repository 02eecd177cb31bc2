#include <doctest.h>

#include <sstream>
#include <string>

#include "rcv/csv_io.hpp"
#include "rcv/errors.hpp"

TEST_CASE("reading a column") {
  std::istringstream plain("1.5\n  2\n\n3e1\r\n");
  CHECK(rcv::read_column(plain) == std::vector<double>{1.5, 2.0, 30.0});
  std::istringstream header("value\n4\n5\n");
  CHECK(rcv::read_column(header, true) == std::vector<double>{4.0, 5.0});
  std::istringstream unflagged("value\n4\n5\n");
  CHECK_THROWS_AS((void)rcv::read_column(unflagged), rcv::DataError);
}

TEST_CASE("bad rows name their line") {
  std::string text;
  for (int i = 1; i <= 16; ++i) text += std::to_string(i) + "\n";
  text += "12x\n18\n";
  std::istringstream in(text);
  try {
    (void)rcv::read_column(in);
    FAIL("expected a DataError");
  } catch (const rcv::DataError& e) {
    CHECK(std::string(e.what()).find("line 17") != std::string::npos);
  }
  std::istringstream nan_row("1\nnan\n");
  CHECK_THROWS_AS((void)rcv::read_column(nan_row), rcv::DataError);
  std::istringstream two_cols("1,2\n");
  CHECK_THROWS_AS((void)rcv::read_column(two_cols), rcv::DataError);
}

TEST_CASE("reading a sample file") {
  CHECK_THROWS_AS((void)rcv::read_sample_file("/nonexistent/file.csv"), rcv::DataError);
  const auto s = rcv::read_sample_file(std::string(RCV_TEST_DATA_DIR) + "/fixture_sample.csv", true);
  CHECK(s.size() >= 50);
}
