#pragma once

#include <optional>

namespace rcv {

/// Mean and central moments mu2..mu4 of a distribution. A disengaged
/// optional marks a moment that does not exist (e.g. Pareto II tails).
struct MomentSet {
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> mu3;
  std::optional<double> mu4;

  [[nodiscard]] bool has_four() const { return mean && variance && mu3 && mu4; }
  [[nodiscard]] double skewness() const;  // requires has_four()
  [[nodiscard]] double kurtosis() const;  // non-excess; requires has_four()
};

}  // namespace rcv
