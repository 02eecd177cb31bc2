#pragma once

#include "rcv/moments.hpp"

namespace rcv {

class Sample;

/// Generalized lambda distribution in the FKML parameterization
///
///   Q(p) = location + [ (p^left - 1)/left - ((1-p)^right - 1)/right ] / inverse_scale
///
/// `left_shape` controls the lower tail (p -> 0) and `right_shape` the upper
/// tail. A shape of zero is the logarithmic limit. The k-th moment exists iff
/// min(left_shape, right_shape) > -1/k.
struct GldFkml {
  double location = 0.0;
  double inverse_scale = 1.0;
  double left_shape = 0.0;
  double right_shape = 0.0;

  /// Throws ParameterError when inverse_scale <= 0 or any value is not finite.
  void validate() const;

  [[nodiscard]] double lower_support() const;
  [[nodiscard]] double upper_support() const;
};

[[nodiscard]] double gld_quantile(const GldFkml& params, double p);

/// Q'(p) = [p^(left-1) + (1-p)^(right-1)] / inverse_scale.
[[nodiscard]] double gld_quantile_density(const GldFkml& params, double p);

/// Solves Q(u) = x by bracketing on u in [1e-12, 1 - 1e-12]; returns 0 or 1
/// outside that range.
[[nodiscard]] double gld_cdf(const GldFkml& params, double x);

/// f(x) = 1 / Q'(F(x)). Throws DomainError when x lies outside
/// [Q(1e-12), Q(1 - 1e-12)].
[[nodiscard]] double gld_density_at(const GldFkml& params, double x);

/// Closed-form mean and central moments (beta-function identities; a
/// quadrature path replaces them for shapes within 0.05 of zero).
[[nodiscard]] MomentSet gld_moments(const GldFkml& params);

/// Method-of-moments fit. Matches skewness and kurtosis with a damped
/// Newton multistart over the shape pair, then recovers scale and location.
/// Throws FitFailure when no solution exists with both shapes > -1/4.
[[nodiscard]] GldFkml fit_moments(const MomentSet& moments);

/// Fit to the sample moments n^{-1} sum (x - mean)^k.
[[nodiscard]] GldFkml fit_moments(const Sample& sample);

}  // namespace rcv
