#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcv/distributions.hpp"
#include "rcv/measure.hpp"
#include "rcv/sample.hpp"

namespace rcv {

/// Hyndman-Fan definition 8: h = (n + 1/3) p + 1/3 clamped to [1, n], then
/// linear interpolation between x_(floor h) and x_(ceil h).
[[nodiscard]] double hf8_quantile(const Sample& s, double p);
/// Same on an already sorted span.
[[nodiscard]] double hf8_quantile_sorted(std::span<const double> sorted, double p);
/// Same on an unsorted buffer, partially reordering it (nth_element).
[[nodiscard]] double hf8_quantile_inplace(std::span<double> values, double p);

/// Median of |x_i - m| with both medians taken by hf8_quantile at p = 1/2.
[[nodiscard]] double sample_mad(const Sample& s);

struct DispersionEstimate {
  Measure measure;
  double value;
  /// Estimated asymptotic standard deviation (sqrt-n scale).
  double asd_hat;
  std::size_t n;
  std::map<std::string, double> diagnostics;
};

/// s / xbar with the n-1 divisor. asd_hat plugs sample moments into the
/// CV asymptotic variance. Throws DegenerateError when xbar = 0.
[[nodiscard]] DispersionEstimate estimate_cv(const Sample& s);
/// 0.75 IQR / m from type-8 quartiles; asd_hat from kernel quantile densities.
/// Throws DegenerateError when the sample median is 0.
[[nodiscard]] DispersionEstimate estimate_rcv_q(const Sample& s);
/// 1.4826 MAD / m; asd_hat from a method-of-moments GLD fit (kernel plug-in
/// when the fit fails, flagged as diagnostics["gld_fallback"] = 1).
[[nodiscard]] DispersionEstimate estimate_rcv_m(const Sample& s);
[[nodiscard]] DispersionEstimate estimate(const Sample& s, Measure m);

/// Point values only (no standard errors); used by resampling loops. The
/// span overloads may reorder `scratch`.
[[nodiscard]] double rcv_m_value(std::span<double> scratch);
[[nodiscard]] double rcv_q_value(std::span<double> scratch);

/// Epanechnikov-kernel estimate of the quantile density g(p) = Q'(p):
///   g_hat(p) = int K_h(u - p) dQ_8(u)
/// where Q_8 is the piecewise-linear type-8 sample quantile function. The
/// integral is an exact finite sum over order-statistic gaps.
/// Requires 0 < h < min(p, 1-p). Throws DegenerateError when the estimate is 0.
[[nodiscard]] double quantile_density_estimate(const Sample& s, double p, double h);

/// h = min{ (15/n)^(1/5) |QOR(p)|^(2/5), 0.9 min(p, 1-p) } with
/// QOR(p) = g(p)/g''(p) evaluated under `reference` (normal when empty).
[[nodiscard]] double bandwidth_qor(double p, std::size_t n,
                                   const std::optional<DistributionSpec>& reference = {});

/// Quantile density estimate with the default QOR bandwidth.
[[nodiscard]] double quantile_density_estimate(const Sample& s, double p);

}  // namespace rcv
