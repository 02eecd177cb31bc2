#include "rcv/robust_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcv/asymptotic_variance.hpp"
#include "rcv/errors.hpp"
#include "rcv/gld.hpp"
#include "rcv/special_functions.hpp"

namespace rcv {

namespace {

constexpr double kThird = 1.0 / 3.0;

void check_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0,1)");
  }
}

struct Position {
  std::size_t index;  // 0-based lower order statistic
  double fraction;
};

Position hf8_position(std::size_t n, double p) {
  const double nd = static_cast<double>(n);
  const double h = std::clamp((nd + kThird) * p + kThird, 1.0, nd);
  const double lo = std::floor(h);
  return {static_cast<std::size_t>(lo) - 1, h - lo};
}

// Integrated Epanechnikov kernel.
double kernel_cdf(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 0.5 + 0.75 * t - 0.25 * t * t * t;
}

double empirical_cdf(std::span<const double> sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double density_from_kernel(const Sample& s, double p) {
  if (!(p > 0.0 && p < 1.0)) return 0.0;
  return 1.0 / quantile_density_estimate(s, p);
}

MadEvaluation kernel_mad_evaluation(const Sample& s, double m, double mad) {
  const auto sorted = s.sorted();
  const double fl = empirical_cdf(sorted, m - mad);
  const double fu = empirical_cdf(sorted, m + mad);
  return {m, mad, density_from_kernel(s, 0.5), density_from_kernel(s, fl),
          density_from_kernel(s, fu), fl, fu};
}

double gld_density_at_probability(const GldFkml& g, double u) {
  if (!(u > 0.0 && u < 1.0)) return 0.0;
  return 1.0 / gld_quantile_density(g, u);
}

MadEvaluation gld_mad_evaluation(const GldFkml& g, double m, double mad) {
  const double center = gld_quantile(g, 0.5);
  const double fl = gld_cdf(g, center - mad);
  const double fu = gld_cdf(g, center + mad);
  return {m,
          mad,
          gld_density_at_probability(g, 0.5),
          gld_density_at_probability(g, fl),
          gld_density_at_probability(g, fu),
          fl,
          fu};
}

}  // namespace

double hf8_quantile_sorted(std::span<const double> sorted, double p) {
  check_probability(p, "hf8_quantile");
  if (sorted.empty()) throw SizeError("hf8_quantile: empty sample");
  const auto [k, frac] = hf8_position(sorted.size(), p);
  const double lo = sorted[k];
  if (frac == 0.0 || k + 1 >= sorted.size()) return lo;
  return lo + frac * (sorted[k + 1] - lo);
}

double hf8_quantile(const Sample& s, double p) { return hf8_quantile_sorted(s.sorted(), p); }

double hf8_quantile_inplace(std::span<double> values, double p) {
  check_probability(p, "hf8_quantile");
  if (values.empty()) throw SizeError("hf8_quantile: empty sample");
  const auto [k, frac] = hf8_position(values.size(), p);
  const auto nth = values.begin() + static_cast<std::ptrdiff_t>(k);
  std::nth_element(values.begin(), nth, values.end());
  const double lo = *nth;
  if (frac == 0.0 || k + 1 >= values.size()) return lo;
  const double hi = *std::min_element(nth + 1, values.end());
  return lo + frac * (hi - lo);
}

double sample_mad(const Sample& s) {
  const double m = hf8_quantile(s, 0.5);
  std::vector<double> dev(s.size());
  std::transform(s.values().begin(), s.values().end(), dev.begin(),
                 [m](double x) { return std::fabs(x - m); });
  return hf8_quantile_inplace(dev, 0.5);
}

double rcv_m_value(std::span<double> scratch) {
  const double m = hf8_quantile_inplace(scratch, 0.5);
  if (m == 0.0) throw DegenerateError("RCV_M: sample median is zero");
  for (double& x : scratch) x = std::fabs(x - m);
  return kMadFactor * hf8_quantile_inplace(scratch, 0.5) / m;
}

double rcv_q_value(std::span<double> scratch) {
  std::sort(scratch.begin(), scratch.end());
  const double m = hf8_quantile_sorted(scratch, 0.5);
  if (m == 0.0) throw DegenerateError("RCV_Q: sample median is zero");
  return kRcvQFactor * (hf8_quantile_sorted(scratch, 0.75) - hf8_quantile_sorted(scratch, 0.25)) /
         m;
}

double quantile_density_estimate(const Sample& s, double p, double h) {
  check_probability(p, "quantile_density_estimate");
  if (!(h > 0.0 && h < std::min(p, 1.0 - p))) {
    throw DomainError("quantile_density_estimate: bandwidth must lie in (0, min(p, 1-p))");
  }
  const auto x = s.sorted();
  const std::size_t n = x.size();
  const double scale = static_cast<double>(n) + kThird;
  auto node = [scale](std::size_t i) { return (static_cast<double>(i) + 1.0 - kThird) / scale; };

  // Segments i with node(i+1) > p - h and node(i) < p + h.
  const double first = std::floor((p - h) * scale - 2.0);
  const double last = std::ceil((p + h) * scale);
  const std::size_t begin = first <= 0.0 ? 0 : static_cast<std::size_t>(first);
  const std::size_t end =
      std::min(n - 1, last <= 0.0 ? std::size_t{0} : static_cast<std::size_t>(last));

  double total = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double gap = x[i + 1] - x[i];
    if (gap == 0.0) continue;
    const double weight = kernel_cdf((node(i + 1) - p) / h) - kernel_cdf((node(i) - p) / h);
    total += gap * scale * weight;
  }
  if (!(total > 0.0)) {
    throw DegenerateError("quantile_density_estimate: zero density estimate (tied observations)");
  }
  return total;
}

double bandwidth_qor(double p, std::size_t n, const std::optional<DistributionSpec>& reference) {
  check_probability(p, "bandwidth_qor");
  if (n < 2) throw SizeError("bandwidth_qor: n must be at least 2");
  const double cap = 0.9 * std::min(p, 1.0 - p);

  double qor;
  if (!reference) {
    const double z = normal_quantile(p);
    const double phi = normal_pdf(z);
    qor = phi * phi / (1.0 + 2.0 * z * z);
  } else {
    const double step = 1e-3 * std::min(p, 1.0 - p);
    const double g = quantile_density(*reference, p);
    const double curvature = (quantile_density(*reference, p + step) - 2.0 * g +
                              quantile_density(*reference, p - step)) /
                             (step * step);
    if (!(std::fabs(curvature) > 0.0) || !std::isfinite(curvature)) return cap;
    qor = g / curvature;
  }
  const double h = std::pow(15.0 / static_cast<double>(n), 0.2) * std::pow(std::fabs(qor), 0.4);
  return std::min(h, cap);
}

double quantile_density_estimate(const Sample& s, double p) {
  return quantile_density_estimate(s, p, bandwidth_qor(p, s.size()));
}

DispersionEstimate estimate_cv(const Sample& s) {
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("CV: sample mean is zero");
  const double sd = s.stddev();
  const double mu3 = s.central_moment(3);
  const double mu4 = s.central_moment(4);
  DispersionEstimate out{Measure::Cv, sd / mean, 0.0, s.size(), {}};
  out.asd_hat = std::sqrt(std::max(0.0, cv_asv_formula(mean, sd, mu3, mu4)));
  out.diagnostics = {{"mean", mean}, {"sd", sd}, {"mu3", mu3}, {"mu4", mu4}};
  return out;
}

DispersionEstimate estimate_rcv_q(const Sample& s) {
  const double m = hf8_quantile(s, 0.5);
  if (m == 0.0) throw DegenerateError("RCV_Q: sample median is zero");
  QuartileEvaluation q{hf8_quantile(s, 0.25),
                       m,
                       hf8_quantile(s, 0.75),
                       quantile_density_estimate(s, 0.25),
                       quantile_density_estimate(s, 0.5),
                       quantile_density_estimate(s, 0.75)};
  DispersionEstimate out{Measure::RcvQ, kRcvQFactor * (q.q3 - q.q1) / m, 0.0, s.size(), {}};
  out.asd_hat = std::sqrt(std::max(0.0, rcv_q_asv_formula(q)));
  out.diagnostics = {{"q1", q.q1},       {"median", q.median},     {"q3", q.q3},
                     {"g_025", q.g1},    {"g_050", q.g_median},    {"g_075", q.g3},
                     {"bandwidth_050", bandwidth_qor(0.5, s.size())}};
  return out;
}

DispersionEstimate estimate_rcv_m(const Sample& s) {
  const double m = hf8_quantile(s, 0.5);
  if (m == 0.0) throw DegenerateError("RCV_M: sample median is zero");
  const double mad = sample_mad(s);
  if (mad == 0.0) throw DegenerateError("RCV_M: sample MAD is zero");

  DispersionEstimate out{Measure::RcvM, kMadFactor * mad / m, 0.0, s.size(), {}};
  MadTheory theory{};
  bool fallback = false;
  try {
    const GldFkml g = fit_moments(s);
    theory = mad_theory_formula(gld_mad_evaluation(g, m, mad));
    out.diagnostics = {{"gld_location", g.location},
                       {"gld_inverse_scale", g.inverse_scale},
                       {"gld_left_shape", g.left_shape},
                       {"gld_right_shape", g.right_shape}};
  } catch (const FitFailure&) {
    fallback = true;
  } catch (const DegenerateError&) {
    fallback = true;
  }
  if (fallback) {
    out.diagnostics.clear();
    theory = mad_theory_formula(kernel_mad_evaluation(s, m, mad));
  }
  out.asd_hat = std::sqrt(std::max(0.0, rcv_m_asv_formula(theory)));
  out.diagnostics["gld_fallback"] = fallback ? 1.0 : 0.0;
  out.diagnostics["median"] = m;
  out.diagnostics["mad"] = mad;
  out.diagnostics["var_median"] = theory.var_median;
  out.diagnostics["var_mad"] = theory.var_mad;
  out.diagnostics["cov_median_mad"] = theory.cov;
  return out;
}

DispersionEstimate estimate(const Sample& s, Measure m) {
  switch (m) {
    case Measure::Cv:
      return estimate_cv(s);
    case Measure::RcvQ:
      return estimate_rcv_q(s);
    case Measure::RcvM:
      return estimate_rcv_m(s);
  }
  throw ParameterError("estimate: unknown measure");
}

}  // namespace rcv
