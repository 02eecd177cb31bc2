#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rcv {

/// Validated i.i.d. sample: at least two finite observations, with the
/// order statistics cached at construction.
class Sample {
 public:
  /// Throws SizeError for n < 2 and DataError for NaN/infinite entries.
  explicit Sample(std::vector<double> values);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<const double> sorted() const { return sorted_; }

  [[nodiscard]] double mean() const;
  /// Sample standard deviation with the n-1 divisor.
  [[nodiscard]] double stddev() const;
  /// n^{-1} sum (x_i - mean)^k.
  [[nodiscard]] double central_moment(int k) const;

  /// Returns a copy with every observation multiplied by k.
  [[nodiscard]] Sample scaled(double k) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

}  // namespace rcv
