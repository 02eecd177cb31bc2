#pragma once

#include <ostream>
#include <vector>

#include "rcv/distributions.hpp"

namespace rcv {

/// Families tabulated by `truth --table measures`.
[[nodiscard]] std::vector<DistributionSpec> measure_reference_families();
/// Families tabulated by `truth --table rasd`.
[[nodiscard]] std::vector<DistributionSpec> rasd_reference_families();

enum class TruthColumns { Measures, Rasd, All };

/// CSV with a header row and one row per family, 3 decimals, and
/// "undefined" where a moment does not exist.
void write_truth_csv(std::ostream& out, const std::vector<DistributionSpec>& families,
                     TruthColumns columns);

}  // namespace rcv
