#include "rcv/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rcv/errors.hpp"
#include "rcv/random.hpp"

namespace rcv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  if (!std::isfinite(v)) return "undefined";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : "undefined";
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

std::optional<double> parse_optional(const std::string& text, std::size_t line_no) {
  if (text == "undefined") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": not a number: '" + text + "'");
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

void SimulationConfig::validate() const {
  if (distributions.empty()) throw ParameterError("simulation: no distributions");
  if (sample_sizes.empty()) throw ParameterError("simulation: no sample sizes");
  if (methods.empty()) throw ParameterError("simulation: no methods");
  if (trials < 1) throw ParameterError("simulation: trials must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("simulation: level must lie in (0,1)");
  for (std::size_t n : sample_sizes) {
    if (n < 2) throw ParameterError("simulation: sample sizes must be at least 2");
  }
  for (IntervalMethod m : methods) {
    if (m == IntervalMethod::RatioTwoSample) {
      throw ParameterError("simulation: the two-sample ratio method is not simulated");
    }
  }
}

SimulationConfig parse_simulation_config(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("simulation config: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("simulation config: expected a JSON object");
  SimulationConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "distributions") {
        for (const auto& d : value) cfg.distributions.push_back(parse_distribution(d.get<std::string>()));
      } else if (key == "sample_sizes") {
        cfg.sample_sizes = value.get<std::vector<std::size_t>>();
      } else if (key == "trials") {
        cfg.trials = value.get<std::size_t>();
      } else if (key == "level") {
        cfg.level = value.get<double>();
      } else if (key == "methods") {
        for (const auto& m : value) cfg.methods.push_back(parse_interval_method(m.get<std::string>()));
      } else if (key == "base_seed") {
        cfg.base_seed = value.get<std::uint64_t>();
      } else if (key == "boot_b") {
        cfg.boot_b = value.get<std::size_t>();
      } else if (key == "inverse_scaling") {
        const auto s = value.get<std::string>();
        if (s == "sqrt-n") {
          cfg.inverse_scaling = InverseScaling::SqrtN;
        } else if (s == "quartic-root") {
          cfg.inverse_scaling = InverseScaling::QuarticRoot;
        } else {
          throw ParameterError("simulation config: inverse_scaling must be sqrt-n or quartic-root");
        }
      } else if (key == "workers") {
        cfg.workers = value.get<unsigned>();
      } else {
        throw ParameterError("simulation config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("simulation config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::optional<double> target_value(IntervalMethod method, const DistributionSpec& spec) {
  const Measure measure = target_measure(method);
  if (measure == Measure::Cv) {
    const MomentSet m = central_moments(spec);
    if (!m.mean || !m.variance || *m.mean == 0.0) return std::nullopt;
    return std::sqrt(*m.variance) / *m.mean;
  }
  const TrueMeasures t = true_measures(spec);
  return measure == Measure::RcvQ ? t.rcv_q : t.rcv_m;
}

std::vector<CoverageResult> run_coverage(const SimulationConfig& config,
                                         const ProgressCallback& progress) {
  config.validate();
  const std::size_t n_dist = config.distributions.size();
  const std::size_t n_size = config.sample_sizes.size();
  const std::size_t n_method = config.methods.size();
  const std::size_t trials = config.trials;
  const std::size_t cells = n_dist * n_size;
  const std::size_t total = cells * trials;

  std::vector<std::vector<std::optional<double>>> truth(n_dist);
  for (std::size_t d = 0; d < n_dist; ++d) {
    for (IntervalMethod m : config.methods) {
      truth[d].push_back(target_value(m, config.distributions[d]));
    }
  }

  // widths[(cell * n_method + method) * trials + trial]; NaN marks a failure.
  std::vector<double> widths(cells * n_method * trials, kNaN);
  std::vector<unsigned char> covered(widths.size(), 0);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  const std::size_t report_every = std::max<std::size_t>(1, total / 100);

  auto worker = [&] {
    try {
      for (std::size_t item = next++; item < total; item = next++) {
        const std::size_t cell = item / trials;
        const std::size_t trial = item % trials;
        const std::size_t d = cell / n_size;
        const std::size_t n = config.sample_sizes[cell % n_size];
        const std::uint64_t seed = derive_seed(config.base_seed, d, n, trial);
        const Sample data = sample(config.distributions[d], n, seed);
        for (std::size_t k = 0; k < n_method; ++k) {
          IntervalRequest request;
          request.method = config.methods[k];
          request.level = config.level;
          request.bootstrap = {config.boot_b,
                               derive_seed(seed, 0xb0075ULL, static_cast<std::uint64_t>(request.method))};
          request.inverse_scaling = config.inverse_scaling;
          const std::size_t slot = (cell * n_method + k) * trials + trial;
          try {
            const ConfidenceInterval ci = compute_interval(data, request);
            widths[slot] = ci.width();
            covered[slot] = truth[d][k] && ci.contains(*truth[d][k]) ? 1 : 0;
          } catch (const Error&) {
            // failure: counts as non-coverage
          }
        }
        const std::size_t finished = ++done;
        if (progress && (finished % report_every == 0 || finished == total)) {
          const std::lock_guard lock(progress_mutex);
          progress(finished, total);
        }
      }
    } catch (...) {
      const std::lock_guard lock(fatal_mutex);
      if (!fatal) fatal = std::current_exception();
      next = total;
    }
  };

  unsigned workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<CoverageResult> results;
  results.reserve(cells * n_method);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const std::size_t d = cell / n_size;
    const std::size_t n = config.sample_sizes[cell % n_size];
    for (std::size_t k = 0; k < n_method; ++k) {
      const std::size_t base = (cell * n_method + k) * trials;
      std::vector<double> ok;
      std::size_t hits = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        if (!std::isnan(widths[base + t])) ok.push_back(widths[base + t]);
        hits += covered[base + t];
      }
      const std::size_t produced = ok.size();
      CoverageResult r;
      r.distribution = config.distributions[d].label();
      r.n = n;
      r.method = config.methods[k];
      r.true_value = truth[d][k];
      if (r.true_value) r.coverage = static_cast<double>(hits) / static_cast<double>(trials);
      r.mean_width = ok.empty() ? kNaN
                                : std::accumulate(ok.begin(), ok.end(), 0.0) /
                                      static_cast<double>(ok.size());
      r.median_width = median_of(std::move(ok));
      r.failures = trials - produced;
      r.trials = trials;
      results.push_back(std::move(r));
    }
  }
  return results;
}

std::string emit_results(const std::vector<CoverageResult>& results, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    auto value = [](const std::optional<double>& v) -> nlohmann::ordered_json {
      if (!v || !std::isfinite(*v)) return "undefined";
      return *v;
    };
    for (const auto& r : results) {
      rows.push_back({{"distribution", r.distribution},
                      {"n", r.n},
                      {"method", to_string(r.method)},
                      {"coverage", value(r.coverage)},
                      {"mean_width", value(r.mean_width)},
                      {"median_width", value(r.median_width)},
                      {"failures", r.failures},
                      {"trials", r.trials},
                      {"true_value", value(r.true_value)}});
    }
    return rows.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "distribution,n,method,coverage,mean_width,median_width,failures,trials,true_value\n";
  for (const auto& r : results) {
    out << csv_field(r.distribution) << ',' << r.n << ',' << to_string(r.method) << ','
        << format_optional(r.coverage) << ',' << format_number(r.mean_width) << ','
        << format_number(r.median_width) << ',' << r.failures << ',' << r.trials << ','
        << format_optional(r.true_value) << '\n';
  }
  return out.str();
}

std::vector<CoverageResult> read_results_csv(std::string_view text) {
  std::vector<CoverageResult> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 || line.empty()) continue;
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 9) {
      throw DataError("line " + std::to_string(line_no) + ": expected 9 fields, found " +
                      std::to_string(f.size()));
    }
    CoverageResult r;
    r.distribution = f[0];
    r.n = static_cast<std::size_t>(parse_optional(f[1], line_no).value_or(0.0));
    r.method = parse_interval_method(f[2]);
    r.coverage = parse_optional(f[3], line_no);
    r.mean_width = parse_optional(f[4], line_no).value_or(kNaN);
    r.median_width = parse_optional(f[5], line_no).value_or(kNaN);
    r.failures = static_cast<std::size_t>(parse_optional(f[6], line_no).value_or(0.0));
    r.trials = static_cast<std::size_t>(parse_optional(f[7], line_no).value_or(0.0));
    r.true_value = parse_optional(f[8], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace rcv
