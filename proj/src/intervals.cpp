#include "rcv/intervals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "rcv/distributions.hpp"
#include "rcv/errors.hpp"
#include "rcv/gld.hpp"
#include "rcv/random.hpp"
#include "rcv/robust_estimators.hpp"
#include "rcv/special_functions.hpp"

namespace rcv {

namespace {

constexpr std::array<std::pair<IntervalMethod, std::string_view>, 11> kMethodNames{{
    {IntervalMethod::Inverse, "inverse"},
    {IntervalMethod::MedMill, "med-mill"},
    {IntervalMethod::MedMMcK, "med-mmck"},
    {IntervalMethod::Panich, "panich"},
    {IntervalMethod::Gulhar, "gulhar"},
    {IntervalMethod::DeltaCv, "delta-cv"},
    {IntervalMethod::RcvQ, "rcvq"},
    {IntervalMethod::RcvMAsymptotic, "asymptotic"},
    {IntervalMethod::RcvMBootNP, "boot-np"},
    {IntervalMethod::RcvMBootParam, "boot-param"},
    {IntervalMethod::RatioTwoSample, "ratio"},
}};

double z_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("confidence level must lie in (0,1)");
  return normal_quantile(0.5 + 0.5 * level);
}

ConfidenceInterval ordered(IntervalMethod method, double level, double estimate, double a,
                           double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw MethodFailure(to_string(method) + ": non-finite interval bound");
  }
  return {method, level, estimate, std::min(a, b), std::max(a, b), {}};
}

ConfidenceInterval log_wald(IntervalMethod method, double level, const DispersionEstimate& e) {
  if (!(e.value > 0.0)) {
    throw DegenerateError(to_string(method) + ": estimate must be positive for a log-scale interval");
  }
  const double half = z_value(level) * e.asd_hat / (e.value * std::sqrt(static_cast<double>(e.n)));
  const double center = std::log(e.value);
  auto ci = ordered(method, level, e.value, std::exp(center - half), std::exp(center + half));
  ci.diagnostics = e.diagnostics;
  ci.diagnostics["asd_hat"] = e.asd_hat;
  return ci;
}

// Median-centred standard deviation with the n-1 divisor.
double median_centred_sd(const Sample& s) {
  const double m = hf8_quantile(s, 0.5);
  double sum = 0.0;
  for (double x : s.values()) sum += (x - m) * (x - m);
  return std::sqrt(sum / static_cast<double>(s.size() - 1));
}

// Modified McKay family: c sqrt( ((chi2 + 2)/n - 1) c^2 + chi2/(n-1) ) at both tails.
ConfidenceInterval mckay_type(IntervalMethod method, double level, double c, std::size_t n) {
  const double alpha = 1.0 - level;
  const double dof = static_cast<double>(n - 1);
  const double nd = static_cast<double>(n);
  auto bound = [&](double chi2) {
    const double radicand = ((chi2 + 2.0) / nd - 1.0) * c * c + chi2 / dof;
    if (!(radicand >= 0.0)) {
      throw MethodFailure(to_string(method) + ": negative radicand (coefficient of variation " +
                          std::to_string(c) + " too large)");
    }
    return c * std::sqrt(radicand);
  };
  const double upper_chi = chisq_quantile(dof, 1.0 - alpha / 2.0);
  const double lower_chi = chisq_quantile(dof, alpha / 2.0);
  auto ci = ordered(method, level, c, bound(upper_chi), bound(lower_chi));
  ci.diagnostics = {{"chisq_upper", upper_chi}, {"chisq_lower", lower_chi}};
  return ci;
}

void require_replicates(const BootstrapOptions& options) {
  if (options.replicates < 100) throw ParameterError("bootstrap: at least 100 replicates required");
}

double point_rcv_m(const Sample& s) {
  std::vector<double> scratch(s.values().begin(), s.values().end());
  const double value = rcv_m_value(scratch);
  if (value == 0.0) throw DegenerateError("bootstrap: sample MAD is zero");
  return value;
}

// Runs `draw` into a buffer of size n for each replicate and collects RCV_M.
template <typename Draw>
ConfidenceInterval percentile_bootstrap(IntervalMethod method, double level, double estimate,
                                        std::size_t n, const BootstrapOptions& options,
                                        Draw&& draw) {
  require_replicates(options);
  (void)z_value(level);
  const double alpha = 1.0 - level;
  std::vector<double> stats;
  stats.reserve(options.replicates);
  std::vector<double> buffer(n);
  std::size_t skipped = 0;
  for (std::size_t b = 0; b < options.replicates; ++b) {
    std::mt19937_64 engine(derive_seed(options.seed, b));
    draw(engine, buffer);
    try {
      stats.push_back(rcv_m_value(buffer));
    } catch (const DegenerateError&) {
      ++skipped;
    }
  }
  if (static_cast<double>(skipped) > 0.1 * static_cast<double>(options.replicates)) {
    throw DegenerateError(to_string(method) + ": more than 10% of resamples had a zero median");
  }
  auto ci = ordered(method, level, estimate, hf8_quantile_inplace(stats, alpha / 2.0),
                    hf8_quantile_inplace(stats, 1.0 - alpha / 2.0));
  ci.diagnostics = {{"replicates", static_cast<double>(options.replicates)},
                    {"skipped", static_cast<double>(skipped)}};
  return ci;
}

}  // namespace

std::string to_string(IntervalMethod method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return std::string(name);
  }
  return "unknown";
}

IntervalMethod parse_interval_method(std::string_view text) {
  for (const auto& [m, name] : kMethodNames) {
    if (name == text) return m;
  }
  throw ParameterError("unknown interval method '" + std::string(text) + "'");
}

Measure target_measure(IntervalMethod method) {
  switch (method) {
    case IntervalMethod::Inverse:
    case IntervalMethod::MedMill:
    case IntervalMethod::MedMMcK:
    case IntervalMethod::Panich:
    case IntervalMethod::Gulhar:
    case IntervalMethod::DeltaCv:
      return Measure::Cv;
    case IntervalMethod::RcvQ:
      return Measure::RcvQ;
    case IntervalMethod::RcvMAsymptotic:
    case IntervalMethod::RcvMBootNP:
    case IntervalMethod::RcvMBootParam:
      return Measure::RcvM;
    case IntervalMethod::RatioTwoSample:
      break;
  }
  throw ParameterError("target_measure: the ratio method has no single target measure");
}

ConfidenceInterval ci_inverse(const Sample& s, double level, InverseScaling scaling) {
  const double z = z_value(level);
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("inverse: sample mean is zero");
  const double cv = s.stddev() / mean;
  if (cv == 0.0) throw DegenerateError("inverse: sample CV is zero");
  const double n = static_cast<double>(s.size());
  const double c = scaling == InverseScaling::SqrtN ? 1.0 / std::sqrt(n) : std::pow(n, -0.25);
  const double near = 1.0 / cv + z * c;
  const double far = 1.0 / cv - z * c;
  if (!(far > 0.0)) {
    throw MethodFailure("inverse: 1/cv - z c is not positive, the interval is unbounded");
  }
  auto ci = ordered(IntervalMethod::Inverse, level, cv, 1.0 / near, 1.0 / far);
  ci.diagnostics = {{"scaling", c}};
  return ci;
}

ConfidenceInterval ci_med_mill(const Sample& s, double level) {
  const double z = z_value(level);
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("med-mill: sample mean is zero");
  const double c = median_centred_sd(s) / mean;
  const double half =
      z * std::sqrt(c * c * (0.5 + c * c) / static_cast<double>(s.size() - 1));
  return ordered(IntervalMethod::MedMill, level, c, c - half, c + half);
}

ConfidenceInterval ci_med_mmck(const Sample& s, double level) {
  (void)z_value(level);
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("med-mmck: sample mean is zero");
  return mckay_type(IntervalMethod::MedMMcK, level, median_centred_sd(s) / mean, s.size());
}

ConfidenceInterval ci_panich(const Sample& s, double level) {
  (void)z_value(level);
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("panich: sample mean is zero");
  const double n = static_cast<double>(s.size());
  const double k = std::sqrt(s.central_moment(2) * n) / (std::sqrt(n) * mean);
  return mckay_type(IntervalMethod::Panich, level, k, s.size());
}

ConfidenceInterval ci_gulhar(const Sample& s, double level) {
  (void)z_value(level);
  const double mean = s.mean();
  if (mean == 0.0) throw DegenerateError("gulhar: sample mean is zero");
  const double cv = s.stddev() / mean;
  const double alpha = 1.0 - level;
  const double dof = static_cast<double>(s.size() - 1);
  const double upper_chi = chisq_quantile(dof, 1.0 - alpha / 2.0);
  const double lower_chi = chisq_quantile(dof, alpha / 2.0);
  const double scaled = std::sqrt(dof) * cv;
  auto ci = ordered(IntervalMethod::Gulhar, level, cv, scaled / std::sqrt(upper_chi),
                    scaled / std::sqrt(lower_chi));
  ci.diagnostics = {{"chisq_upper", upper_chi}, {"chisq_lower", lower_chi}};
  return ci;
}

ConfidenceInterval ci_delta_cv(const Sample& s, double level) {
  return log_wald(IntervalMethod::DeltaCv, level, estimate_cv(s));
}

ConfidenceInterval ci_rcv_q(const Sample& s, double level) {
  return log_wald(IntervalMethod::RcvQ, level, estimate_rcv_q(s));
}

ConfidenceInterval ci_rcv_m_asymptotic(const Sample& s, double level) {
  return log_wald(IntervalMethod::RcvMAsymptotic, level, estimate_rcv_m(s));
}

ConfidenceInterval ci_rcv_m_boot_np(const Sample& s, double level,
                                    const BootstrapOptions& options) {
  const double estimate = point_rcv_m(s);
  const auto data = s.values();
  const double n = static_cast<double>(data.size());
  return percentile_bootstrap(
      IntervalMethod::RcvMBootNP, level, estimate, data.size(), options,
      [&](std::mt19937_64& engine, std::vector<double>& out) {
        for (double& v : out) {
          const auto i = static_cast<std::size_t>(unit_uniform(engine) * n);
          v = data[std::min(i, data.size() - 1)];
        }
      });
}

ConfidenceInterval ci_rcv_m_boot_param(const Sample& s, double level,
                                       const BootstrapOptions& options) {
  const double estimate = point_rcv_m(s);
  const GldFkml fit = fit_moments(s);
  auto ci = percentile_bootstrap(IntervalMethod::RcvMBootParam, level, estimate, s.size(), options,
                                 [&](std::mt19937_64& engine, std::vector<double>& out) {
                                   for (double& v : out) v = gld_quantile(fit, unit_uniform(engine));
                                 });
  ci.diagnostics["gld_location"] = fit.location;
  ci.diagnostics["gld_inverse_scale"] = fit.inverse_scale;
  ci.diagnostics["gld_left_shape"] = fit.left_shape;
  ci.diagnostics["gld_right_shape"] = fit.right_shape;
  return ci;
}

ConfidenceInterval ci_ratio_two_sample(const Sample& first, const Sample& second, Measure measure,
                                       double level, SeCombine combine) {
  const double z = z_value(level);
  const DispersionEstimate a = estimate(first, measure);
  const DispersionEstimate b = estimate(second, measure);
  if (!(a.value > 0.0) || !(b.value > 0.0)) {
    throw DegenerateError("ratio: both estimates must be positive for a log-scale interval");
  }
  auto se = [](const DispersionEstimate& e) {
    return e.asd_hat / (e.value * std::sqrt(static_cast<double>(e.n)));
  };
  const double se1 = se(a);
  const double se2 = se(b);
  const double combined =
      combine == SeCombine::LinearSum ? se1 + se2 : std::sqrt(se1 * se1 + se2 * se2);
  const double ratio = a.value / b.value;
  const double center = std::log(ratio);
  auto ci = ordered(IntervalMethod::RatioTwoSample, level, ratio, std::exp(center - z * combined),
                    std::exp(center + z * combined));
  ci.diagnostics = {{"estimate_first", a.value},
                    {"estimate_second", b.value},
                    {"se_log_first", se1},
                    {"se_log_second", se2},
                    {"se_log_combined", combined}};
  return ci;
}

ConfidenceInterval compute_interval(const Sample& s, const IntervalRequest& r) {
  switch (r.method) {
    case IntervalMethod::Inverse:
      return ci_inverse(s, r.level, r.inverse_scaling);
    case IntervalMethod::MedMill:
      return ci_med_mill(s, r.level);
    case IntervalMethod::MedMMcK:
      return ci_med_mmck(s, r.level);
    case IntervalMethod::Panich:
      return ci_panich(s, r.level);
    case IntervalMethod::Gulhar:
      return ci_gulhar(s, r.level);
    case IntervalMethod::DeltaCv:
      return ci_delta_cv(s, r.level);
    case IntervalMethod::RcvQ:
      return ci_rcv_q(s, r.level);
    case IntervalMethod::RcvMAsymptotic:
      return ci_rcv_m_asymptotic(s, r.level);
    case IntervalMethod::RcvMBootNP:
      return ci_rcv_m_boot_np(s, r.level, r.bootstrap);
    case IntervalMethod::RcvMBootParam:
      return ci_rcv_m_boot_param(s, r.level, r.bootstrap);
    case IntervalMethod::RatioTwoSample:
      break;
  }
  throw ParameterError("compute_interval: the ratio method needs two samples");
}

}  // namespace rcv
