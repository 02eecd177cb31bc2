#pragma once

namespace rcv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

[[nodiscard]] double normal_pdf(double x);
[[nodiscard]] double normal_cdf(double x);

/// Inverse of the standard normal cdf. Rational starting approximation
/// followed by Halley refinement against erfc; accurate to a few ulps.
/// Throws DomainError unless 0 < p < 1.
[[nodiscard]] double normal_quantile(double p);

/// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
[[nodiscard]] double gamma_p(double a, double x);
[[nodiscard]] double gamma_q(double a, double x);

[[nodiscard]] double chisq_pdf(double dof, double x);
[[nodiscard]] double chisq_cdf(double dof, double x);

/// Chi-square quantile: Wilson-Hilferty start, then safeguarded Newton on
/// the regularized incomplete gamma (upper tail used above the median).
[[nodiscard]] double chisq_quantile(double dof, double p);

[[nodiscard]] double log_beta(double a, double b);

}  // namespace rcv
