#include <doctest.h>

#include <cmath>
#include <string>

#include "rcv/coverage.hpp"
#include "rcv/distributions.hpp"
#include "rcv/errors.hpp"
#include "rcv/intervals.hpp"

#include <json.hpp>

using doctest::Approx;
using rcv::IntervalMethod;

namespace {

rcv::SimulationConfig small_config() {
  rcv::SimulationConfig c;
  c.distributions = {rcv::Normal{5.0, 1.0}, rcv::LogNormal{0.0, 1.0}};
  c.sample_sizes = {30, 60};
  c.trials = 40;
  c.methods = {IntervalMethod::Gulhar, IntervalMethod::RcvQ, IntervalMethod::RcvMAsymptotic,
               IntervalMethod::RcvMBootNP};
  c.boot_b = 200;
  c.base_seed = 77;
  return c;
}

}  // namespace

TEST_CASE("config validation and parsing") {
  auto c = small_config();
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), rcv::ParameterError);
  c = small_config();
  c.methods.push_back(IntervalMethod::RatioTwoSample);
  CHECK_THROWS_AS(c.validate(), rcv::ParameterError);

  const auto parsed = rcv::parse_simulation_config(R"J({
    "distributions": ["normal(5,1)", "exp(1)"],
    "sample_sizes": [50, 100],
    "trials": 10,
    "methods": ["rcvq", "asymptotic"],
    "inverse_scaling": "quartic-root",
    "workers": 2
  })J");
  CHECK(parsed.distributions.size() == 2);
  CHECK(parsed.sample_sizes == std::vector<std::size_t>{50, 100});
  CHECK(parsed.trials == 10);
  CHECK(parsed.level == 0.95);
  CHECK(parsed.methods[1] == IntervalMethod::RcvMAsymptotic);
  CHECK(parsed.inverse_scaling == rcv::InverseScaling::QuarticRoot);
  CHECK(parsed.workers == 2);
  CHECK_THROWS_AS((void)rcv::parse_simulation_config(R"J({"distributions": ["exp(1)"]})J"),
                  rcv::ParameterError);
  CHECK_THROWS_AS((void)rcv::parse_simulation_config(
                      R"J({"distributions": ["exp(1)"], "methods": ["rcvq"], "trails": 5})J"),
                  rcv::ParameterError);
  CHECK_THROWS_AS((void)rcv::parse_simulation_config("{not json"), rcv::ParameterError);
}

TEST_CASE("target values") {
  const rcv::DistributionSpec e = rcv::Exponential{1.0};
  CHECK(*rcv::target_value(IntervalMethod::Gulhar, e) == Approx(1.0));
  CHECK(*rcv::target_value(IntervalMethod::RcvQ, e) == Approx(rcv::true_measures(e).rcv_q));
  CHECK(*rcv::target_value(IntervalMethod::RcvMBootParam, e) ==
        Approx(rcv::true_measures(e).rcv_m));
  CHECK_FALSE(rcv::target_value(IntervalMethod::DeltaCv,
                                rcv::DistributionSpec(rcv::ParetoII{1.0, 1.5}))
                  .has_value());
}

TEST_CASE("a single trial") {
  rcv::SimulationConfig c;
  c.distributions = {rcv::Exponential{1.0}};
  c.sample_sizes = {40};
  c.trials = 1;
  c.methods = {IntervalMethod::RcvQ};
  c.workers = 1;
  const auto results = rcv::run_coverage(c);
  REQUIRE(results.size() == 1);
  const auto& r = results[0];
  REQUIRE(r.coverage.has_value());
  CHECK((*r.coverage == 0.0 || *r.coverage == 1.0));
  CHECK(r.mean_width == r.median_width);
  CHECK(r.trials == 1);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = small_config();
  c.workers = 1;
  const auto one = rcv::run_coverage(c);
  c.workers = 3;
  const auto three = rcv::run_coverage(c);
  CHECK(rcv::emit_results(one, rcv::OutputFormat::Csv) ==
        rcv::emit_results(three, rcv::OutputFormat::Csv));
  REQUIRE(one.size() == 2 * 2 * 4);
  for (const auto& r : one) {
    REQUIRE(r.coverage.has_value());
    CHECK(*r.coverage >= 0.0);
    CHECK(*r.coverage <= 1.0);
    CHECK(r.failures <= r.trials);
    CHECK(r.true_value.has_value());
  }
}

TEST_CASE("emitting and reading results") {
  auto c = small_config();
  c.trials = 10;
  c.workers = 2;
  c.distributions.push_back(rcv::ParetoII{1.0, 1.5});
  c.methods = {IntervalMethod::DeltaCv, IntervalMethod::RcvQ};
  const auto results = rcv::run_coverage(c);
  const std::string csv = rcv::emit_results(results, rcv::OutputFormat::Csv);
  CHECK(csv.rfind("distribution,n,method,coverage,mean_width,median_width,failures,trials,"
                  "true_value\n",
                  0) == 0);
  CHECK(csv.find("\"normal(5,1)\"") != std::string::npos);
  CHECK(csv.find("undefined") != std::string::npos);

  const auto json = nlohmann::json::parse(rcv::emit_results(results, rcv::OutputFormat::Json));
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(json.size() == lines - 1);
  CHECK(json.size() == results.size());

  const auto back = rcv::read_results_csv(csv);
  REQUIRE(back.size() == results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].distribution == results[i].distribution);
    CHECK(back[i].n == results[i].n);
    CHECK(back[i].method == results[i].method);
    CHECK(back[i].coverage.has_value() == results[i].coverage.has_value());
    CHECK(back[i].failures == results[i].failures);
  }
  CHECK(rcv::emit_results(back, rcv::OutputFormat::Csv) == csv);
  CHECK_THROWS_AS((void)rcv::read_results_csv("a,b\n1,2\n"), rcv::DataError);
}
