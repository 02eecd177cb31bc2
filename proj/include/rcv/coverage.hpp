#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcv/distributions.hpp"
#include "rcv/intervals.hpp"

namespace rcv {

struct SimulationConfig {
  std::vector<DistributionSpec> distributions;
  std::vector<std::size_t> sample_sizes{50, 100, 200, 500, 1000};
  std::size_t trials = 2000;
  double level = 0.95;
  std::vector<IntervalMethod> methods;
  std::uint64_t base_seed = 1;
  std::size_t boot_b = 2000;
  InverseScaling inverse_scaling = InverseScaling::SqrtN;
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;

  /// Throws ParameterError when empty lists, trials < 1, n < 2, a ratio
  /// method or a level outside (0,1) is given.
  void validate() const;
};

/// Parses a JSON document with keys distributions, sample_sizes, trials,
/// level, methods, base_seed, boot_b, inverse_scaling and workers. Only
/// distributions and methods are required. Throws ParameterError.
[[nodiscard]] SimulationConfig parse_simulation_config(std::string_view json_text);

struct CoverageResult {
  std::string distribution;
  std::size_t n;
  IntervalMethod method;
  /// Empty when the target measure does not exist for the distribution.
  std::optional<double> coverage;
  /// Mean and median over the intervals that were produced; NaN when none.
  double mean_width;
  double median_width;
  std::size_t failures;
  std::size_t trials;
  std::optional<double> true_value;
};

/// Called with (completed, total) work items from worker threads, serialized.
using ProgressCallback = std::function<void(std::size_t, std::size_t)>;

/// Runs every (distribution, n) cell for `trials` trials. Trial t of cell
/// (d, n) draws its sample with seed derive_seed(base_seed, d, n, t), so the
/// result does not depend on the number of workers. Method failures count as
/// non-coverage.
[[nodiscard]] std::vector<CoverageResult> run_coverage(const SimulationConfig& config,
                                                       const ProgressCallback& progress = {});

/// Population value a method's interval is scored against.
[[nodiscard]] std::optional<double> target_value(IntervalMethod method,
                                                 const DistributionSpec& spec);

enum class OutputFormat { Csv, Json };

[[nodiscard]] std::string emit_results(const std::vector<CoverageResult>& results,
                                       OutputFormat format);
/// Reads the CSV produced by emit_results. Throws DataError.
[[nodiscard]] std::vector<CoverageResult> read_results_csv(std::string_view text);

}  // namespace rcv
