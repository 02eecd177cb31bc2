#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rcv/asymptotic_variance.hpp"
#include "rcv/distributions.hpp"
#include "rcv/errors.hpp"
#include "rcv/influence.hpp"
#include "rcv/special_functions.hpp"

using doctest::Approx;
using rcv::DistributionSpec;
using rcv::FunctionalKind;

namespace {

const DistributionSpec kExp = rcv::Exponential{1.0};
const DistributionSpec kNormal = rcv::Normal{5.0, 1.0};

std::vector<DistributionSpec> table_one_families() {
  return {rcv::Normal{5.0, 1.0},     rcv::Exponential{1.0},    rcv::Uniform{0.0, 1.0},
          rcv::Weibull{1.0, 2.0},    rcv::Weibull{1.0, 5.0},   rcv::ChiSquare{5.0},
          rcv::LogNormal{0.0, 1.0},  rcv::LogNormal{0.0, 2.0}, rcv::ParetoII{1.0, 2.5},
          rcv::ParetoII{1.0, 5.0}};
}

bool has_fourth_moment(const DistributionSpec& spec) {
  return rcv::central_moments(spec).has_four();
}

}  // namespace

TEST_CASE("moment influence functions") {
  CHECK(rcv::if_mean(5.0, kNormal) == Approx(0.0));
  CHECK(rcv::if_variance(5.0, kNormal) == Approx(-1.0));
  CHECK(rcv::if_mean(3.0, kExp) == Approx(2.0));
  CHECK(rcv::if_variance(3.0, kExp) == Approx(3.0));
  CHECK(rcv::if_cv(1.0, kExp) == Approx(-0.5));
  CHECK(std::fabs(rcv::if_cv(100.0, kExp)) > std::fabs(rcv::if_cv(10.0, kExp)));
  CHECK_THROWS_AS((void)rcv::if_variance(1.0, DistributionSpec(rcv::ParetoII{1.0, 1.5})),
                  rcv::DomainError);
}

TEST_CASE("quantile influence functions") {
  CHECK(rcv::if_quantile(0.0, 0.5, kExp) == Approx(-1.0));
  CHECK(rcv::if_quantile(1e6, 0.5, kExp) == Approx(1.0));
  CHECK(rcv::if_quantile(1e3, 0.5, kExp) == rcv::if_quantile(1e6, 0.5, kExp));
  // Right limit at the breakpoint.
  CHECK(rcv::if_quantile(std::log(2.0), 0.5, kExp) == Approx(1.0));
  for (double x : {-1.0, 0.3, 2.0, 40.0}) {
    CHECK(rcv::if_quantile_ratio(x, 0.3, 0.3, kExp) == Approx(0.0));
  }
  // IF_p(0) = -1, IF_q(0) = -1, ratio 2, so (-1 + 2) / ln 2.
  CHECK(rcv::if_quantile_ratio(0.0, 0.75, 0.5, kExp) == Approx(1.0 / std::log(2.0)));
}

TEST_CASE("RCV_Q influence function is piecewise constant") {
  const rcv::InfluenceEvaluator eval(kExp);
  const auto bp = eval.breakpoints(FunctionalKind::rcv_q());
  REQUIRE(bp.size() == 3);
  CHECK(bp[0] == Approx(std::log(4.0 / 3.0)));
  CHECK(bp[1] == Approx(std::log(2.0)));
  CHECK(bp[2] == Approx(std::log(4.0)));
  const std::vector<double> edges{-1.0, bp[0], bp[1], bp[2], 50.0};
  std::vector<double> levels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = rcv::if_rcv_q(edges[i] + 1e-9, kExp);
    const double b = rcv::if_rcv_q(0.5 * (edges[i] + edges[i + 1]), kExp);
    const double c = rcv::if_rcv_q(edges[i + 1] - 1e-9, kExp);
    CHECK(a == Approx(b));
    CHECK(b == Approx(c));
    levels.push_back(b);
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) CHECK(levels[i] != Approx(levels[i + 1]));
  CHECK(std::fabs(rcv::if_expectation(FunctionalKind::rcv_q(), kExp)) < 1e-6);
  CHECK(std::sqrt(rcv::asv_quadrature_oracle(FunctionalKind::rcv_q(), kExp)) /
            rcv::true_measures(kExp).rcv_q ==
        Approx(1.594).epsilon(5e-4));
}

TEST_CASE("MAD influence function reduces to the standard-normal form") {
  const double c = rcv::normal_quantile(0.75);
  const double scale = 1.0 / (4.0 * c * rcv::normal_pdf(c));
  for (double mu : {0.0, 5.0, -3.0}) {
    const DistributionSpec spec = rcv::Normal{mu, 1.0};
    for (double x : {-4.0, -1.0, -0.3, 0.0, 0.2, 0.9, 2.5}) {
      const double z = x;
      const double expected = scale * (std::fabs(z) > c ? 1.0 : -1.0);
      CHECK(rcv::if_mad(mu + x, spec) == Approx(expected).epsilon(1e-5));
    }
  }
  const auto theory = rcv::mad_theory(DistributionSpec(rcv::Normal{0.0, 1.0}));
  CHECK(theory.c3 == Approx(0.0).scale(1e-12));
}

TEST_CASE("RCV_M influence function") {
  double sup = 0.0;
  for (double x = 0.0; x < 1e4; x = x * 1.5 + 0.01) {
    sup = std::max(sup, std::fabs(rcv::if_rcv_m(x, kExp)));
  }
  CHECK(std::isfinite(sup));
  CHECK(sup < 10.0);
  CHECK(rcv::if_rcv_m(1e3, kExp) == rcv::if_rcv_m(1e6, kExp));
  CHECK(std::fabs(rcv::if_expectation(FunctionalKind::rcv_m(), kExp)) < 1e-6);
  const double oracle = rcv::asv_quadrature_oracle(FunctionalKind::rcv_m(), kExp);
  CHECK(oracle == Approx(rcv::asv_rcv_m(kExp)).epsilon(1e-5));
  CHECK(std::sqrt(oracle) / rcv::true_measures(kExp).rcv_m == Approx(0.950).epsilon(5e-4));
}

TEST_CASE("contamination checker") {
  for (double x : {-3.0, 0.5, 7.0}) {
    for (double eps : {1e-6, 1e-3, 1e-2}) {
      CHECK(rcv::if_numeric_check(FunctionalKind::mean(), x, kExp, eps) ==
            Approx(x - 1.0).epsilon(1e-8));
    }
  }
  CHECK(std::fabs(rcv::if_numeric_check(FunctionalKind::quantile(0.5), 3.0, kExp) -
                  rcv::if_quantile(3.0, 0.5, kExp)) < 1e-3);
  CHECK(std::fabs(rcv::if_numeric_check(FunctionalKind::rcv_m(), 3.0, kExp) -
                  rcv::if_rcv_m(3.0, kExp)) < 1e-3);
  CHECK_THROWS_AS((void)rcv::if_numeric_check(FunctionalKind::mean(), 1.0, kExp, 0.5),
                  rcv::DomainError);
  CHECK_THROWS_AS((void)FunctionalKind::quantile(1.0), rcv::DomainError);
}

TEST_CASE("finite-difference agreement on a grid") {
  const std::vector<FunctionalKind> kinds{
      FunctionalKind::mean(),          FunctionalKind::variance(), FunctionalKind::cv(),
      FunctionalKind::quantile(0.5),   FunctionalKind::quantile_ratio(0.75, 0.5),
      FunctionalKind::rcv_q(),         FunctionalKind::mad(),      FunctionalKind::rcv_m()};
  for (const DistributionSpec spec :
       {DistributionSpec(rcv::LogNormal{0.0, 1.0}), DistributionSpec(rcv::Weibull{1.0, 2.0})}) {
    const rcv::InfluenceEvaluator eval(spec);
    for (const auto& kind : kinds) {
      const auto bp = eval.breakpoints(kind);
      for (int i = 1; i <= 9; ++i) {
        const double x = rcv::quantile(spec, i / 10.0 - 0.0137);
        const bool near_break = std::any_of(bp.begin(), bp.end(), [&](double b) {
          return std::fabs(b - x) < 1e-3;
        });
        if (near_break) continue;
        CAPTURE(spec.label());
        CAPTURE(kind.label());
        CAPTURE(x);
        const double analytic = eval(kind, x);
        const double numeric = rcv::if_numeric_check(kind, x, spec);
        CHECK(std::fabs(analytic - numeric) <= std::max(1e-3, 1e-2 * std::fabs(analytic)));
      }
    }
  }
}

TEST_CASE("influence functions have zero mean") {
  const std::vector<FunctionalKind> robust{FunctionalKind::quantile(0.25), FunctionalKind::rcv_q(),
                                           FunctionalKind::mad(), FunctionalKind::rcv_m()};
  for (const auto& spec : table_one_families()) {
    CAPTURE(spec.label());
    for (const auto& kind : robust) {
      CAPTURE(kind.label());
      CHECK(std::fabs(rcv::if_expectation(kind, spec)) < 1e-6);
    }
    if (has_fourth_moment(spec)) {
      for (const auto& kind :
           {FunctionalKind::mean(), FunctionalKind::variance(), FunctionalKind::cv()}) {
        CAPTURE(kind.label());
        CHECK(std::fabs(rcv::if_expectation(kind, spec)) < 1e-6);
      }
    }
  }
}

TEST_CASE("robust influence functions are bounded") {
  for (const DistributionSpec spec :
       {DistributionSpec(rcv::ParetoII{1.0, 2.5}), DistributionSpec(rcv::LogNormal{0.0, 2.0})}) {
    const double hi = rcv::quantile(spec, 1.0 - 1e-6);
    const double far = rcv::if_rcv_m(hi, spec);
    CHECK(rcv::if_rcv_m(10 * hi, spec) == far);
    CHECK(rcv::if_rcv_q(10 * hi, spec) == rcv::if_rcv_q(hi, spec));
    CHECK(rcv::if_mad(10 * hi, spec) == rcv::if_mad(hi, spec));
    CHECK(std::fabs(rcv::if_cv(10 * hi, spec)) > 10 * std::fabs(rcv::if_cv(hi / 10, spec)));
  }
}

TEST_CASE("influence curve output") {
  std::ostringstream out;
  rcv::write_if_curve(out, kExp, 11);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,if_cv,if_rcv_q,if_rcv_m");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);

  std::ostringstream heavy;
  rcv::write_if_curve(heavy, DistributionSpec(rcv::ParetoII{1.0, 1.5}), 3);
  CHECK(heavy.str().find("undefined") != std::string::npos);
}
