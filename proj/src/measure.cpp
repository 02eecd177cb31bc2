#include "rcv/measure.hpp"

#include "rcv/errors.hpp"

namespace rcv {

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Cv:
      return "cv";
    case Measure::RcvQ:
      return "rcvq";
    case Measure::RcvM:
      return "rcvm";
  }
  return "unknown";
}

Measure parse_measure(std::string_view text) {
  if (text == "cv") return Measure::Cv;
  if (text == "rcvq") return Measure::RcvQ;
  if (text == "rcvm") return Measure::RcvM;
  throw ParameterError("unknown measure '" + std::string(text) + "' (expected cv, rcvq or rcvm)");
}

}  // namespace rcv
