#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "rcv/measure.hpp"
#include "rcv/sample.hpp"

namespace rcv {

enum class IntervalMethod {
  Inverse,
  MedMill,
  MedMMcK,
  Panich,
  Gulhar,
  DeltaCv,
  RcvQ,
  RcvMAsymptotic,
  RcvMBootNP,
  RcvMBootParam,
  RatioTwoSample,
};

[[nodiscard]] std::string to_string(IntervalMethod method);
/// Accepts the names produced by to_string. Throws ParameterError.
[[nodiscard]] IntervalMethod parse_interval_method(std::string_view text);
/// The measure a single-sample method targets.
[[nodiscard]] Measure target_measure(IntervalMethod method);

struct ConfidenceInterval {
  IntervalMethod method;
  double level;
  double estimate;
  double lower;
  double upper;
  std::map<std::string, double> diagnostics;

  [[nodiscard]] double width() const { return upper - lower; }
  [[nodiscard]] bool contains(double value) const { return lower <= value && value <= upper; }
};

/// Scaling of the normal quantile in the inverse method:
/// SqrtN uses z / sqrt(n), QuarticRoot uses z / n^(1/4).
enum class InverseScaling { SqrtN, QuarticRoot };

struct BootstrapOptions {
  std::size_t replicates = 2000;
  std::uint64_t seed = 0;
};

/// Combination of the two standard errors of a log ratio.
enum class SeCombine { LinearSum, Quadrature };

/// [1/cv + z c]^-1 .. [1/cv - z c]^-1 with c set by `scaling`.
/// Throws MethodFailure when 1/cv - z c <= 0 (unbounded interval).
[[nodiscard]] ConfidenceInterval ci_inverse(const Sample& s, double level = 0.95,
                                            InverseScaling scaling = InverseScaling::SqrtN);
/// Median-modified Miller interval on s~/xbar, s~ centred at the sample median.
[[nodiscard]] ConfidenceInterval ci_med_mill(const Sample& s, double level = 0.95);
/// Median-modified modified-McKay interval. Throws MethodFailure on a
/// negative radicand.
[[nodiscard]] ConfidenceInterval ci_med_mmck(const Sample& s, double level = 0.95);
/// Modified McKay with the normal MLE k~ = sqrt(sum (x - xbar)^2) / (sqrt(n) xbar).
[[nodiscard]] ConfidenceInterval ci_panich(const Sample& s, double level = 0.95);
/// sqrt(n-1) cv / sqrt(chi2_{n-1}) at the two tail quantiles.
[[nodiscard]] ConfidenceInterval ci_gulhar(const Sample& s, double level = 0.95);
/// Log-scale Wald interval for the CV with moment plug-in standard error.
[[nodiscard]] ConfidenceInterval ci_delta_cv(const Sample& s, double level = 0.95);
/// Log-scale Wald interval for RCV_Q with kernel quantile densities.
[[nodiscard]] ConfidenceInterval ci_rcv_q(const Sample& s, double level = 0.95);
/// Log-scale Wald interval for RCV_M with GLD-based plug-ins.
[[nodiscard]] ConfidenceInterval ci_rcv_m_asymptotic(const Sample& s, double level = 0.95);
/// Percentile interval from resampling the data with replacement.
[[nodiscard]] ConfidenceInterval ci_rcv_m_boot_np(const Sample& s, double level = 0.95,
                                                  const BootstrapOptions& options = {});
/// Percentile interval from resampling a method-of-moments GLD fit.
/// Throws FitFailure when the fit fails.
[[nodiscard]] ConfidenceInterval ci_rcv_m_boot_param(const Sample& s, double level = 0.95,
                                                     const BootstrapOptions& options = {});

/// Interval for measure(s1) / measure(s2) on the log scale.
[[nodiscard]] ConfidenceInterval ci_ratio_two_sample(const Sample& first, const Sample& second,
                                                     Measure measure, double level = 0.95,
                                                     SeCombine combine = SeCombine::LinearSum);

struct IntervalRequest {
  IntervalMethod method = IntervalMethod::RcvMAsymptotic;
  double level = 0.95;
  BootstrapOptions bootstrap{};
  InverseScaling inverse_scaling = InverseScaling::SqrtN;
};

/// Dispatches a single-sample method. RatioTwoSample is rejected.
[[nodiscard]] ConfidenceInterval compute_interval(const Sample& s, const IntervalRequest& request);

}  // namespace rcv
