#include "rcv/truth_table.hpp"

#include <cstdio>
#include <optional>
#include <string>

#include "rcv/asymptotic_variance.hpp"

namespace rcv {

namespace {

std::string cell(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

std::string quoted(const std::string& label) { return "\"" + label + "\""; }

}  // namespace

std::vector<DistributionSpec> measure_reference_families() {
  return {Normal{5.0, 1.0},     Exponential{1.0},   Uniform{0.0, 1.0},   Weibull{1.0, 1.0},
          Weibull{1.0, 2.0},    Weibull{1.0, 5.0},  ChiSquare{2.0},      ChiSquare{5.0},
          LogNormal{0.0, 1.0},  LogNormal{0.0, 2.0}, ParetoII{1.0, 2.5}, ParetoII{1.0, 5.0}};
}

std::vector<DistributionSpec> rasd_reference_families() {
  std::vector<DistributionSpec> out;
  for (double sd : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) out.emplace_back(Normal{5.0, sd});
  for (double sd : {0.1, 0.25, 0.5, 0.75, 1.0, 1.5}) out.emplace_back(LogNormal{0.0, sd});
  out.emplace_back(Exponential{1.0});
  for (double a : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5}) {
    out.emplace_back(ParetoII{1.0, a});
  }
  return out;
}

void write_truth_csv(std::ostream& out, const std::vector<DistributionSpec>& families,
                     TruthColumns columns) {
  const bool measures = columns != TruthColumns::Rasd;
  const bool spreads = columns != TruthColumns::Measures;
  out << "distribution";
  if (measures) out << ",cv,rcv_q,rcv_m";
  if (spreads) out << ",rasd_cv,rasd_rcv_q,rasd_rcv_m";
  out << '\n';
  for (const auto& spec : families) {
    out << quoted(spec.label());
    if (measures) {
      const TrueMeasures t = true_measures(spec);
      out << ',' << cell(t.cv) << ',' << cell(t.rcv_q) << ',' << cell(t.rcv_m);
    }
    if (spreads) {
      out << ',' << cell(rasd(Measure::Cv, spec)) << ',' << cell(rasd(Measure::RcvQ, spec)) << ','
          << cell(rasd(Measure::RcvM, spec));
    }
    out << '\n';
  }
}

}  // namespace rcv
