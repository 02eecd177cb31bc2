#include "rcv/asymptotic_variance.hpp"

#include <cmath>

#include "rcv/errors.hpp"
#include "rcv/influence.hpp"

namespace rcv {

double cv_asv_formula(double mean, double sd, double mu3, double mu4) {
  if (mean == 0.0) throw DegenerateError("CV asymptotic variance: mean is zero");
  const double cv = sd / mean;
  const double var = sd * sd;
  return cv * cv *
         ((mu4 - var * var) / (4.0 * var * var) + var / (mean * mean) - mu3 / (var * mean));
}

double rcv_q_asv_formula(const QuartileEvaluation& q) {
  const double m = q.median;
  if (m == 0.0) throw DegenerateError("RCV_Q asymptotic variance: median is zero");
  const double iqr = q.q3 - q.q1;
  const double r = kRcvQFactor * iqr / m;
  const double spread_term =
      (3.0 * (q.g3 * q.g3 + q.g1 * q.g1) - 2.0 * q.g3 * q.g1) / (4.0 * iqr * iqr);
  const double center_term = q.g_median * q.g_median / (m * m);
  const double cross_term = q.g_median * (q.g3 - q.g1) / (m * iqr);
  return r * r / 4.0 * (spread_term + center_term - cross_term);
}

MadTheory mad_theory_formula(const MadEvaluation& e) {
  if (!(e.f_median > 0.0) || !std::isfinite(e.f_median)) {
    throw DegenerateError("MAD theory: density at the median must be positive");
  }
  const double c1 = e.f_lower + e.f_upper;
  if (!(c1 > 0.0) || !std::isfinite(c1)) {
    throw DegenerateError("MAD theory: density at m +/- MAD must not vanish on both sides");
  }
  const double c3 = e.f_lower - e.f_upper;
  const double fm = e.f_median;
  const double c2 = c3 * c3 + 4.0 * c3 * fm * (1.0 - e.cdf_upper - e.cdf_lower);
  MadTheory t{};
  t.median = e.median;
  t.mad = e.mad;
  t.c1 = c1;
  t.c2 = c2;
  t.c3 = c3;
  t.var_median = 1.0 / (4.0 * fm * fm);
  t.var_mad = (1.0 + c2 / (fm * fm)) / (4.0 * c1 * c1);
  t.cov = (1.0 - 4.0 * e.cdf_lower + c3 / fm) / (4.0 * c1 * fm);
  return t;
}

double rcv_m_asv_formula(const MadTheory& t) {
  if (t.median == 0.0) throw DegenerateError("RCV_M asymptotic variance: median is zero");
  if (t.mad == 0.0) throw DegenerateError("RCV_M asymptotic variance: MAD is zero");
  const double m = t.median;
  const double r = kMadFactor * t.mad / m;
  return r * r * (t.var_median / (m * m) + t.var_mad / (t.mad * t.mad) - 2.0 * t.cov / (m * t.mad));
}

std::optional<double> asv_cv(const DistributionSpec& spec) {
  const MomentSet mo = central_moments(spec);
  if (!mo.has_four()) return std::nullopt;
  return cv_asv_formula(*mo.mean, std::sqrt(*mo.variance), *mo.mu3, *mo.mu4);
}

double asv_rcv_q(const DistributionSpec& spec) {
  const QuartileEvaluation q{quantile(spec, 0.25),         quantile(spec, 0.5),
                             quantile(spec, 0.75),         quantile_density(spec, 0.25),
                             quantile_density(spec, 0.5), quantile_density(spec, 0.75)};
  if (!std::isfinite(q.g1) || !std::isfinite(q.g_median) || !std::isfinite(q.g3)) {
    throw DegenerateError("RCV_Q asymptotic variance: density is zero at a quartile");
  }
  return rcv_q_asv_formula(q);
}

MadTheory mad_theory(const DistributionSpec& spec) {
  const double m = quantile(spec, 0.5);
  const double mad = true_mad(spec);
  return mad_theory_formula(
      {m, mad, pdf(spec, m), pdf(spec, m - mad), pdf(spec, m + mad), cdf(spec, m - mad),
       cdf(spec, m + mad)});
}

double asv_rcv_m(const DistributionSpec& spec) { return rcv_m_asv_formula(mad_theory(spec)); }

std::optional<double> asv(Measure measure, const DistributionSpec& spec) {
  switch (measure) {
    case Measure::Cv:
      return asv_cv(spec);
    case Measure::RcvQ:
      return asv_rcv_q(spec);
    case Measure::RcvM:
      return asv_rcv_m(spec);
  }
  throw ParameterError("asv: unknown measure");
}

std::optional<double> rasd(Measure measure, const DistributionSpec& spec) {
  const auto v = asv(measure, spec);
  if (!v) return std::nullopt;
  const TrueMeasures t = true_measures(spec);
  double value = 0.0;
  switch (measure) {
    case Measure::Cv:
      if (!t.cv) return std::nullopt;
      value = *t.cv;
      break;
    case Measure::RcvQ:
      value = t.rcv_q;
      break;
    case Measure::RcvM:
      value = t.rcv_m;
      break;
  }
  return std::sqrt(*v) / std::fabs(value);
}

double asv_quadrature_oracle(const FunctionalKind& kind, const DistributionSpec& spec) {
  const InfluenceEvaluator eval(spec);
  const auto r = expectation(
      spec,
      [&](double x) {
        const double v = eval(kind, x);
        return v * v;
      },
      eval.breakpoints(kind));
  if (!r.converged) {
    throw NumericalError("asv_quadrature_oracle: quadrature did not converge for " + kind.label() +
                         " under " + spec.label() + " (error estimate " +
                         std::to_string(r.abs_error) + ")");
  }
  return r.value;
}

}  // namespace rcv
