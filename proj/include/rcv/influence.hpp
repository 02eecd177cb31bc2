#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rcv/distributions.hpp"
#include "rcv/numerics.hpp"

namespace rcv {

/// A statistical functional whose influence function is available.
/// `Mad` denotes the standardized MAD, 1.4826 * MAD.
class FunctionalKind {
 public:
  enum class Tag { Mean, Variance, Cv, Quantile, QuantileRatio, RcvQ, Mad, RcvM };

  static FunctionalKind mean() { return FunctionalKind(Tag::Mean); }
  static FunctionalKind variance() { return FunctionalKind(Tag::Variance); }
  static FunctionalKind cv() { return FunctionalKind(Tag::Cv); }
  /// Throws DomainError unless 0 < p < 1.
  static FunctionalKind quantile(double p);
  /// Ratio x_p / x_q. Throws DomainError unless both lie in (0,1).
  static FunctionalKind quantile_ratio(double p, double q);
  static FunctionalKind rcv_q() { return FunctionalKind(Tag::RcvQ); }
  static FunctionalKind mad() { return FunctionalKind(Tag::Mad); }
  static FunctionalKind rcv_m() { return FunctionalKind(Tag::RcvM); }

  [[nodiscard]] Tag tag() const { return tag_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] double q() const { return q_; }
  [[nodiscard]] std::string label() const;

 private:
  explicit FunctionalKind(Tag tag, double p = 0.0, double q = 0.0) : tag_(tag), p_(p), q_(q) {}
  Tag tag_;
  double p_;
  double q_;
};

/// Influence functions under a fixed distribution. Quartiles, median, MAD and
/// the densities they need are computed once at construction; moments are
/// used only by Mean, Variance and Cv.
///
/// At a discontinuity the right limit is returned.
class InfluenceEvaluator {
 public:
  explicit InfluenceEvaluator(DistributionSpec spec);

  [[nodiscard]] const DistributionSpec& spec() const { return spec_; }

  /// Throws DomainError when the required moments do not exist and
  /// DegenerateError when the mean is zero (Cv).
  [[nodiscard]] double mean(double x) const;
  [[nodiscard]] double variance(double x) const;
  [[nodiscard]] double cv(double x) const;
  /// {p - 1[x < x_p]} g(p). Throws DegenerateError when f(x_p) = 0.
  [[nodiscard]] double quantile(double x, double p) const;
  [[nodiscard]] double quantile_ratio(double x, double p, double q) const;
  [[nodiscard]] double rcv_q(double x) const;
  /// Standardized MAD: 1.4826 [1/2 - 1{m-MAD <= x < m+MAD} + c3 IF_med(x)] / c1.
  [[nodiscard]] double mad(double x) const;
  [[nodiscard]] double rcv_m(double x) const;

  [[nodiscard]] double operator()(const FunctionalKind& kind, double x) const;

  /// Points where the influence function of `kind` jumps.
  [[nodiscard]] std::vector<double> breakpoints(const FunctionalKind& kind) const;

 private:
  [[nodiscard]] double require_mean() const;
  [[nodiscard]] double require_variance() const;

  DistributionSpec spec_;
  std::optional<double> mean_;
  std::optional<double> variance_;
  double q1_;
  double median_;
  double q3_;
  double g1_;
  double g_median_;
  double g3_;
  double mad_;
  double c1_;
  double c3_;
};

[[nodiscard]] double if_mean(double x, const DistributionSpec& spec);
[[nodiscard]] double if_variance(double x, const DistributionSpec& spec);
[[nodiscard]] double if_cv(double x, const DistributionSpec& spec);
[[nodiscard]] double if_quantile(double x, double p, const DistributionSpec& spec);
[[nodiscard]] double if_quantile_ratio(double x, double p, double q, const DistributionSpec& spec);
[[nodiscard]] double if_rcv_q(double x, const DistributionSpec& spec);
[[nodiscard]] double if_mad(double x, const DistributionSpec& spec);
[[nodiscard]] double if_rcv_m(double x, const DistributionSpec& spec);

/// The functional evaluated at the contaminated model (1 - eps) F + eps delta_x.
/// Quantiles and the MAD of the mixture are found by root finding on the
/// mixture cdf with the point mass handled explicitly.
[[nodiscard]] double functional_at_mixture(const FunctionalKind& kind, const DistributionSpec& spec,
                                           double x, double eps);

/// [T((1 - eps) F + eps delta_x) - T(F)] / eps. Requires 0 < eps <= 0.01.
[[nodiscard]] double if_numeric_check(const FunctionalKind& kind, double x,
                                      const DistributionSpec& spec, double eps = 1e-6);

/// E_F[h(X)] by adaptive quadrature over pieces split at `breakpoints`.
/// Unbounded tails are integrated after the substitution x = b +/- s expm1(w),
/// which turns algebraic tails into exponential ones.
[[nodiscard]] QuadratureResult expectation(const DistributionSpec& spec, const ScalarFunction& h,
                                           std::vector<double> breakpoints);

/// E_F[IF(X)] (zero for a correctly centred influence function).
[[nodiscard]] double if_expectation(const FunctionalKind& kind, const DistributionSpec& spec);

/// Writes x, if_cv, if_rcv_q, if_rcv_m on `points` equally spaced x values
/// over [Q(0.001), Q(0.999)]. if_cv is "undefined" when the variance does not exist.
void write_if_curve(std::ostream& out, const DistributionSpec& spec, int points = 401);

}  // namespace rcv
