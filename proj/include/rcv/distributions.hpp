#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>

#include "rcv/gld.hpp"
#include "rcv/moments.hpp"
#include "rcv/sample.hpp"

namespace rcv {

struct Normal {
  double mean;
  double sd;
};
struct LogNormal {
  double meanlog;
  double sdlog;
};
struct Exponential {
  double rate;
};
struct Uniform {
  double lower;
  double upper;
};
struct Weibull {
  double scale;
  double shape;
};
struct ChiSquare {
  double dof;
};
/// Lomax form: survival (1 + x/scale)^(-shape) on x >= 0.
struct ParetoII {
  double scale;
  double shape;
};

using Family = std::variant<Normal, LogNormal, Exponential, Uniform, Weibull, ChiSquare,
                            ParetoII, GldFkml>;

/// A validated distribution. Construction throws ParameterError when a
/// scale, rate, shape or dof is not strictly positive, or when a Uniform has
/// lower >= upper.
class DistributionSpec {
 public:
  DistributionSpec(Family family);  // NOLINT(google-explicit-constructor)
  template <typename T>
    requires std::is_constructible_v<Family, T> && (!std::is_same_v<std::decay_t<T>, Family>)
  DistributionSpec(T member)  // NOLINT(google-explicit-constructor)
      : DistributionSpec(Family(std::move(member))) {}

  [[nodiscard]] const Family& family() const { return family_; }

  /// Compact label in the CLI grammar, e.g. "exp(1)" or "normal(5,1)".
  [[nodiscard]] std::string label() const;

  [[nodiscard]] double lower_support() const;
  [[nodiscard]] double upper_support() const;

 private:
  Family family_;
};

/// Parses `normal(5,1)`, `lnorm(0,1)`, `exp(1)`, `unif(0,1)`, `weibull(1,2)`,
/// `chisq(5)`, `pareto2(1,4)` and `gld(l1,l2,l3,l4)`. Throws ParameterError.
[[nodiscard]] DistributionSpec parse_distribution(std::string_view text);

[[nodiscard]] double pdf(const DistributionSpec& spec, double x);
[[nodiscard]] double cdf(const DistributionSpec& spec, double x);
/// Generalized inverse of cdf; throws DomainError unless 0 < p < 1.
[[nodiscard]] double quantile(const DistributionSpec& spec, double p);
/// g(p) = 1 / f(Q(p)).
[[nodiscard]] double quantile_density(const DistributionSpec& spec, double p);

[[nodiscard]] MomentSet central_moments(const DistributionSpec& spec);

/// Population MAD: the M solving  int_0^M [f(m+x) + f(m-x)] dx = 1/2  with m
/// the median. Root bracket starts at |Q(0.75) + m| and is doubled (at most
/// 60 times) while the objective is still negative.
[[nodiscard]] double true_mad(const DistributionSpec& spec);

struct TrueMeasures {
  std::optional<double> cv;
  double rcv_q;
  double rcv_m;
  double median;
  double iqr;
  double mad;
};

inline constexpr double kRcvQFactor = 0.75;
inline constexpr double kMadFactor = 1.4826;

/// Throws DegenerateError when the median is zero.
[[nodiscard]] TrueMeasures true_measures(const DistributionSpec& spec);

/// n i.i.d. draws by inverse transform from a 64-bit Mersenne Twister seeded
/// with `seed`. Throws SizeError for n < 2.
[[nodiscard]] Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace rcv
