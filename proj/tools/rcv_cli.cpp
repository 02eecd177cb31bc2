#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcv/coverage.hpp"
#include "rcv/csv_io.hpp"
#include "rcv/errors.hpp"
#include "rcv/influence.hpp"
#include "rcv/intervals.hpp"
#include "rcv/truth_table.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json interval_json(const rcv::ConfidenceInterval& ci, const std::string& measure) {
  nlohmann::ordered_json diag = nlohmann::ordered_json::object();
  for (const auto& [k, v] : ci.diagnostics) diag[k] = v;
  return {{"estimate", ci.estimate},
          {"lower", ci.lower},
          {"upper", ci.upper},
          {"method", rcv::to_string(ci.method)},
          {"measure", measure},
          {"level", ci.level},
          {"diagnostics", diag}};
}

rcv::IntervalMethod resolve_method(const std::string& name, rcv::Measure measure) {
  if (name.empty() || name == "asymptotic") {
    switch (measure) {
      case rcv::Measure::Cv:
        return rcv::IntervalMethod::DeltaCv;
      case rcv::Measure::RcvQ:
        return rcv::IntervalMethod::RcvQ;
      case rcv::Measure::RcvM:
        return rcv::IntervalMethod::RcvMAsymptotic;
    }
  }
  const auto method = rcv::parse_interval_method(name);
  if (method == rcv::IntervalMethod::RatioTwoSample) {
    throw UsageError("the ratio method is available through the compare subcommand");
  }
  if (rcv::target_measure(method) != measure) {
    throw UsageError("method '" + name + "' does not estimate measure '" + rcv::to_string(measure) +
                     "'");
  }
  return method;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw rcv::DataError("cannot open '" + path + "' for writing");
  return file;
}

unsigned default_workers() {
  if (const char* env = std::getenv("RCV_WORKERS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw UsageError("RCV_WORKERS must be a non-negative integer");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative dispersion estimation: CV, RCV_Q and RCV_M"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Point estimate and confidence interval (JSON)");
  std::string est_input;
  std::string est_measure = "rcvm";
  std::string est_method;
  double est_level = 0.95;
  std::size_t est_boot_b = 2000;
  std::uint64_t est_seed = 0;
  bool est_header = false;
  std::string est_scaling = "sqrt-n";
  est->add_option("--input", est_input, "One-column CSV file")->required();
  est->add_option("--measure", est_measure, "cv, rcvq or rcvm")
      ->check(CLI::IsMember({"cv", "rcvq", "rcvm"}));
  est->add_option("--method", est_method,
                  "inverse, med-mill, med-mmck, panich, gulhar, delta-cv, rcvq, asymptotic, "
                  "boot-np, boot-param (default: asymptotic)");
  est->add_option("--level", est_level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  est->add_option("--boot-b", est_boot_b, "Bootstrap replicates");
  est->add_option("--seed", est_seed, "Bootstrap seed");
  est->add_flag("--header", est_header, "Skip the first non-blank line");
  est->add_option("--inverse-scaling", est_scaling, "sqrt-n or quartic-root")
      ->check(CLI::IsMember({"sqrt-n", "quartic-root"}));

  // compare
  auto* cmp = app.add_subcommand("compare", "Ratio interval for two independent samples (JSON)");
  std::string cmp_first;
  std::string cmp_second;
  std::string cmp_measure = "rcvm";
  double cmp_level = 0.95;
  std::string cmp_combine = "linear-sum";
  bool cmp_header = false;
  cmp->add_option("--first", cmp_first, "First one-column CSV")->required();
  cmp->add_option("--second", cmp_second, "Second one-column CSV")->required();
  cmp->add_option("--measure", cmp_measure, "cv, rcvq or rcvm")
      ->check(CLI::IsMember({"cv", "rcvq", "rcvm"}));
  cmp->add_option("--level", cmp_level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  cmp->add_option("--combine", cmp_combine, "linear-sum or quadrature")
      ->check(CLI::IsMember({"linear-sum", "quadrature"}));
  cmp->add_flag("--header", cmp_header, "Skip the first non-blank line of each file");

  // truth
  auto* truth = app.add_subcommand("truth", "Population measures and relative ASDs (CSV)");
  std::string truth_dist;
  std::string truth_table;
  auto* dist_opt = truth->add_option("--dist", truth_dist, "Distribution, e.g. \"exp(1)\"");
  auto* table_opt = truth->add_option("--table", truth_table, "measures or rasd")
                        ->check(CLI::IsMember({"measures", "rasd"}));
  dist_opt->excludes(table_opt);
  truth->require_option(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo coverage study (CSV or JSON)");
  std::string sim_config;
  std::string sim_out = "-";
  std::string sim_format = "csv";
  std::optional<unsigned> sim_workers;
  sim->add_option("--config", sim_config, "JSON configuration file")->required();
  sim->add_option("--out", sim_out, "Output path ('-' for stdout)");
  sim->add_option("--format", sim_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--workers", sim_workers, "Worker threads (default: RCV_WORKERS or all cores)");

  // ifcurve
  auto* ifc = app.add_subcommand("ifcurve", "Influence curves of CV, RCV_Q and RCV_M (CSV)");
  std::string ifc_dist;
  int ifc_points = 401;
  std::string ifc_out = "-";
  ifc->add_option("--dist", ifc_dist, "Distribution, e.g. \"lnorm(0,1)\"")->required();
  ifc->add_option("--points", ifc_points, "Grid size")->check(CLI::Range(2, 1000000));
  ifc->add_option("--out", ifc_out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*est) {
      const auto measure = rcv::parse_measure(est_measure);
      const rcv::Sample data = rcv::read_sample_file(est_input, est_header);
      rcv::IntervalRequest request;
      request.method = resolve_method(est_method, measure);
      request.level = est_level;
      request.bootstrap = {est_boot_b, est_seed};
      request.inverse_scaling = est_scaling == "quartic-root" ? rcv::InverseScaling::QuarticRoot
                                                               : rcv::InverseScaling::SqrtN;
      const auto ci = rcv::compute_interval(data, request);
      auto doc = interval_json(ci, est_measure);
      doc["n"] = data.size();
      std::cout << doc.dump(2) << '\n';
    } else if (*cmp) {
      const auto measure = rcv::parse_measure(cmp_measure);
      const rcv::Sample a = rcv::read_sample_file(cmp_first, cmp_header);
      const rcv::Sample b = rcv::read_sample_file(cmp_second, cmp_header);
      const auto combine =
          cmp_combine == "quadrature" ? rcv::SeCombine::Quadrature : rcv::SeCombine::LinearSum;
      const auto ci = rcv::ci_ratio_two_sample(a, b, measure, cmp_level, combine);
      auto doc = interval_json(ci, cmp_measure);
      doc["n_first"] = a.size();
      doc["n_second"] = b.size();
      doc["combine"] = cmp_combine;
      std::cout << doc.dump(2) << '\n';
    } else if (*truth) {
      if (!truth_dist.empty()) {
        rcv::write_truth_csv(std::cout, {rcv::parse_distribution(truth_dist)},
                             rcv::TruthColumns::All);
      } else if (truth_table == "measures") {
        rcv::write_truth_csv(std::cout, rcv::measure_reference_families(),
                             rcv::TruthColumns::Measures);
      } else {
        rcv::write_truth_csv(std::cout, rcv::rasd_reference_families(), rcv::TruthColumns::Rasd);
      }
    } else if (*sim) {
      std::ifstream in(sim_config);
      if (!in) throw rcv::DataError("cannot open '" + sim_config + "'");
      const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      rcv::SimulationConfig config = rcv::parse_simulation_config(text);
      if (sim_workers) {
        config.workers = *sim_workers;
      } else if (config.workers == 0) {
        config.workers = default_workers();
      }
      const auto results = rcv::run_coverage(config, [](std::size_t done, std::size_t total) {
        std::cerr << "\rsimulate: " << done << "/" << total << std::flush;
        if (done == total) std::cerr << '\n';
      });
      std::ofstream file;
      open_output(sim_out, file) << rcv::emit_results(
          results, sim_format == "json" ? rcv::OutputFormat::Json : rcv::OutputFormat::Csv);
    } else if (*ifc) {
      std::ofstream file;
      rcv::write_if_curve(open_output(ifc_out, file), rcv::parse_distribution(ifc_dist),
                          ifc_points);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const rcv::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const rcv::SizeError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const rcv::ParameterError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const rcv::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
