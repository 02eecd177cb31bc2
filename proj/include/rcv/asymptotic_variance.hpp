#pragma once

#include <optional>

#include "rcv/distributions.hpp"
#include "rcv/measure.hpp"

namespace rcv {

class FunctionalKind;

/// Constants of the joint asymptotic normality of (median, MAD).
struct MadTheory {
  double median;
  double mad;
  double c1;  ///< f(m - MAD) + f(m + MAD)
  double c2;  ///< c3^2 + 4 c3 f(m) [1 - F(m + MAD) - F(m - MAD)]
  double c3;  ///< f(m - MAD) - f(m + MAD)
  double var_median;  ///< asymptotic variance of the median
  double var_mad;     ///< asymptotic variance of the MAD
  double cov;         ///< asymptotic covariance of median and MAD
};

/// Density and cdf values needed by the MAD theory at m and m +/- MAD.
struct MadEvaluation {
  double median;
  double mad;
  double f_median;
  double f_lower;  ///< f(m - MAD)
  double f_upper;  ///< f(m + MAD)
  double cdf_lower;
  double cdf_upper;
};

/// Quartiles and quantile densities g(p) = 1/f(x_p) at p = 1/4, 1/2, 3/4.
struct QuartileEvaluation {
  double q1;
  double median;
  double q3;
  double g1;
  double g_median;
  double g3;
};

// Formulas shared by the population and plug-in sides.

/// CV^2 [ (mu4 - s^4)/(4 s^4) + s^2/mean^2 - mu3/(s^2 mean) ] with CV = sd/mean.
[[nodiscard]] double cv_asv_formula(double mean, double sd, double mu3, double mu4);
/// Asymptotic variance of 0.75 IQR / m.
[[nodiscard]] double rcv_q_asv_formula(const QuartileEvaluation& q);
/// Throws DegenerateError when f(m) or c1 is not positive.
[[nodiscard]] MadTheory mad_theory_formula(const MadEvaluation& e);
/// Asymptotic variance of 1.4826 MAD / m.
[[nodiscard]] double rcv_m_asv_formula(const MadTheory& t);

// Population side.

/// Empty when the fourth moment does not exist. Throws DegenerateError
/// when the mean is zero.
[[nodiscard]] std::optional<double> asv_cv(const DistributionSpec& spec);
[[nodiscard]] double asv_rcv_q(const DistributionSpec& spec);
[[nodiscard]] MadTheory mad_theory(const DistributionSpec& spec);
[[nodiscard]] double asv_rcv_m(const DistributionSpec& spec);
[[nodiscard]] std::optional<double> asv(Measure measure, const DistributionSpec& spec);

/// sqrt(ASV) / measure; empty when the ASV is undefined.
[[nodiscard]] std::optional<double> rasd(Measure measure, const DistributionSpec& spec);

/// E_F[IF(X)^2] by adaptive quadrature split at the breakpoints of the
/// influence function. Throws NumericalError when quadrature fails.
[[nodiscard]] double asv_quadrature_oracle(const FunctionalKind& kind,
                                           const DistributionSpec& spec);

}  // namespace rcv
