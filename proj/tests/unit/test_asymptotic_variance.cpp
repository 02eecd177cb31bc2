#include <doctest.h>

#include <cmath>
#include <vector>

#include "rcv/asymptotic_variance.hpp"
#include "rcv/distributions.hpp"
#include "rcv/influence.hpp"
#include "rcv/special_functions.hpp"

using doctest::Approx;
using rcv::DistributionSpec;
using rcv::FunctionalKind;
using rcv::Measure;

namespace {

const DistributionSpec kExp = rcv::Exponential{1.0};

double rasd_value(Measure m, const DistributionSpec& spec) {
  const auto r = rcv::rasd(m, spec);
  REQUIRE(r.has_value());
  return *r;
}

}  // namespace

TEST_CASE("CV asymptotic variance") {
  for (double sigma : {0.5, 1.0, 3.0}) {
    const DistributionSpec spec = rcv::Normal{5.0, sigma};
    const double cv = sigma / 5.0;
    CHECK(*rcv::asv_cv(spec) == Approx(cv * cv * (0.5 + cv * cv)).epsilon(1e-10));
  }
  CHECK(*rcv::asv_cv(kExp) == Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(rcv::asv_cv(DistributionSpec(rcv::ParetoII{1.0, 4.0})).has_value());
  CHECK(rcv::asv_cv(DistributionSpec(rcv::ParetoII{1.0, 4.5})).has_value());
}

TEST_CASE("RCV_Q asymptotic variance") {
  // g = 4/3, 2, 4 at the quartiles; closed form in the quartile values.
  const double q1 = std::log(4.0 / 3.0);
  const double m = std::log(2.0);
  const double q3 = std::log(4.0);
  const rcv::QuartileEvaluation e{q1, m, q3, 4.0 / 3.0, 2.0, 4.0};
  CHECK(rcv::asv_rcv_q(kExp) == Approx(rcv::rcv_q_asv_formula(e)).epsilon(1e-9));
  CHECK(rcv::asv_rcv_q(kExp) == Approx(3.591).epsilon(5e-4));
  CHECK(rasd_value(Measure::RcvQ, kExp) == Approx(1.594).epsilon(3e-4));
  CHECK(rasd_value(Measure::RcvQ, DistributionSpec(rcv::Normal{5.0, 1.0})) ==
        Approx(1.193).epsilon(4e-4));
}

TEST_CASE("MAD theory") {
  const auto t = rcv::mad_theory(kExp);
  CHECK(t.var_median == Approx(1.0).epsilon(1e-10));
  CHECK(t.mad == Approx(std::asinh(0.5)).epsilon(1e-10));
  CHECK(t.c1 > 0.0);
  CHECK(t.cov * t.cov <= t.var_median * t.var_mad);

  const auto n = rcv::mad_theory(DistributionSpec(rcv::Normal{0.0, 1.0}));
  const double c = rcv::normal_quantile(0.75);
  CHECK(n.c3 == Approx(0.0).scale(1e-12));
  CHECK(n.cov == Approx(0.0).scale(1e-12));
  CHECK(n.var_mad == Approx(1.0 / (16.0 * std::pow(rcv::normal_pdf(c), 2))).epsilon(1e-9));

  for (const DistributionSpec spec :
       {DistributionSpec(rcv::Uniform{0.0, 1.0}), DistributionSpec(rcv::ChiSquare{5.0}),
        DistributionSpec(rcv::LogNormal{0.0, 2.0}), DistributionSpec(rcv::ParetoII{1.0, 2.5}),
        DistributionSpec(rcv::Weibull{1.0, 5.0})}) {
    CAPTURE(spec.label());
    const auto th = rcv::mad_theory(spec);
    CHECK(th.c1 > 0.0);
    CHECK(th.var_median > 0.0);
    CHECK(th.var_mad > 0.0);
    CHECK(th.cov * th.cov <= th.var_median * th.var_mad);
  }
}

TEST_CASE("rASD anchors") {
  CHECK(rasd_value(Measure::Cv, kExp) == Approx(1.0).epsilon(1e-9));
  CHECK(rasd_value(Measure::RcvM, kExp) == Approx(0.950).epsilon(5e-4));
  CHECK(rasd_value(Measure::RcvM, DistributionSpec(rcv::Normal{5.0, 1.0})) ==
        Approx(1.193).epsilon(4e-4));
  CHECK(rasd_value(Measure::RcvM, DistributionSpec(rcv::LogNormal{0.0, 1.0})) ==
        Approx(0.914).epsilon(5e-4));
  const DistributionSpec n3 = rcv::Normal{5.0, 3.0};
  CHECK(rasd_value(Measure::Cv, n3) == Approx(0.927).epsilon(5e-4));
  CHECK(rasd_value(Measure::RcvQ, n3) == Approx(1.388).epsilon(5e-4));
  CHECK(rasd_value(Measure::RcvM, n3) == Approx(1.388).epsilon(5e-4));
  const DistributionSpec p05 = rcv::ParetoII{1.0, 0.5};
  CHECK_FALSE(rcv::rasd(Measure::Cv, p05).has_value());
  CHECK(rasd_value(Measure::RcvQ, p05) == Approx(3.223).epsilon(2e-4));
  CHECK(rasd_value(Measure::RcvM, p05) == Approx(0.419).epsilon(2e-3));
  // Pareto(1): M = 2 sqrt(2) - 2 and ASV / R^2 = sqrt(2) - 1 exactly.
  CHECK(rasd_value(Measure::RcvM, DistributionSpec(rcv::ParetoII{1.0, 1.0})) ==
        Approx(std::sqrt(std::sqrt(2.0) - 1.0)).epsilon(1e-8));
}

TEST_CASE("rASD is scale invariant") {
  for (Measure m : {Measure::Cv, Measure::RcvQ, Measure::RcvM}) {
    CHECK(rasd_value(m, DistributionSpec(rcv::Exponential{0.1})) ==
          Approx(rasd_value(m, kExp)).epsilon(1e-8));
    CHECK(rasd_value(m, DistributionSpec(rcv::Weibull{7.0, 2.0})) ==
          Approx(rasd_value(m, DistributionSpec(rcv::Weibull{1.0, 2.0}))).epsilon(1e-8));
  }
}

TEST_CASE("closed forms agree with the quadrature oracle") {
  for (const DistributionSpec spec :
       {DistributionSpec(rcv::Normal{5.0, 1.0}), kExp, DistributionSpec(rcv::LogNormal{0.0, 1.0}),
        DistributionSpec(rcv::ChiSquare{5.0}), DistributionSpec(rcv::Uniform{0.0, 1.0}),
        DistributionSpec(rcv::ParetoII{1.0, 2.5})}) {
    CAPTURE(spec.label());
    const auto cv = rcv::asv_cv(spec);
    if (cv) {
      CHECK(rcv::asv_quadrature_oracle(FunctionalKind::cv(), spec) == Approx(*cv).epsilon(1e-5));
    }
    CHECK(rcv::asv_quadrature_oracle(FunctionalKind::rcv_q(), spec) ==
          Approx(rcv::asv_rcv_q(spec)).epsilon(1e-5));
    CHECK(rcv::asv_quadrature_oracle(FunctionalKind::rcv_m(), spec) ==
          Approx(rcv::asv_rcv_m(spec)).epsilon(1e-5));
    const auto t = rcv::mad_theory(spec);
    CHECK(rcv::asv_quadrature_oracle(FunctionalKind::quantile(0.5), spec) ==
          Approx(t.var_median).epsilon(1e-5));
    CHECK(rcv::asv_quadrature_oracle(FunctionalKind::mad(), spec) ==
          Approx(t.var_mad * rcv::kMadFactor * rcv::kMadFactor).epsilon(1e-5));
  }
}
