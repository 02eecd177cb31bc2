#pragma once

#include <string>
#include <string_view>

namespace rcv {

/// The three relative-dispersion measures.
enum class Measure { Cv, RcvQ, RcvM };

[[nodiscard]] std::string to_string(Measure m);
/// Accepts "cv", "rcvq", "rcvm" (case-sensitive). Throws ParameterError.
[[nodiscard]] Measure parse_measure(std::string_view text);

}  // namespace rcv
