#include "rcv/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcv/errors.hpp"
#include "rcv/moments.hpp"

namespace rcv {

double MomentSet::skewness() const { return *mu3 / std::pow(*variance, 1.5); }

double MomentSet::kurtosis() const { return *mu4 / (*variance * *variance); }

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw SizeError("sample needs at least 2 observations, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("sample observation " + std::to_string(i + 1) + " is not finite");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double Sample::mean() const {
  double sum = 0.0;
  for (double x : values_) sum += x;
  return sum / static_cast<double>(values_.size());
}

double Sample::stddev() const {
  const double m = mean();
  double ss = 0.0;
  for (double x : values_) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(values_.size() - 1));
}

double Sample::central_moment(int k) const {
  const double m = mean();
  double sum = 0.0;
  for (double x : values_) sum += std::pow(x - m, k);
  return sum / static_cast<double>(values_.size());
}

Sample Sample::scaled(double k) const {
  std::vector<double> out = values_;
  for (auto& x : out) x *= k;
  return Sample(std::move(out));
}

}  // namespace rcv
