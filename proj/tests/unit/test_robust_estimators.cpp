#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcv/distributions.hpp"
#include "rcv/errors.hpp"
#include "rcv/robust_estimators.hpp"
#include "rcv/sample.hpp"
#include "rcv/special_functions.hpp"

using doctest::Approx;
using rcv::Sample;

TEST_CASE("sample validation") {
  CHECK_THROWS_AS(Sample({1.0}), rcv::SizeError);
  CHECK_THROWS_AS(Sample({1.0, std::nan("")}), rcv::DataError);
  CHECK_THROWS_AS(Sample({1.0, INFINITY}), rcv::DataError);
  const Sample s({3.0, 1.0, 2.0});
  CHECK(std::is_sorted(s.sorted().begin(), s.sorted().end()));
  CHECK(s.values()[0] == 3.0);
}

TEST_CASE("type-8 quantile examples") {
  CHECK(rcv::hf8_quantile(Sample({1, 2, 3, 4}), 0.5) == Approx(2.5));
  CHECK(rcv::hf8_quantile(Sample({10, 20, 30, 40}), 0.25) == Approx(14.1667).epsilon(1e-5));
  CHECK(rcv::hf8_quantile(Sample({10, 20, 30, 40}), 0.25) == Approx(10.0 + 10.0 * 5.0 / 12.0));
  CHECK(rcv::hf8_quantile(Sample({7, 7, 7, 7, 7}), 0.13) == 7.0);
  CHECK(rcv::hf8_quantile(Sample({1, 2, 3}), 0.01) == 1.0);
  CHECK(rcv::hf8_quantile(Sample({1, 2, 3}), 0.99) == 3.0);
  CHECK_THROWS_AS((void)rcv::hf8_quantile(Sample({1, 2}), 0.0), rcv::DomainError);
  CHECK_THROWS_AS((void)rcv::hf8_quantile(Sample({1, 2}), 1.0), rcv::DomainError);
}

TEST_CASE("type-8 quantile properties") {
  const auto s = rcv::sample(rcv::LogNormal{0.0, 1.0}, 37, 5);
  double prev = -INFINITY;
  for (int i = 1; i < 200; ++i) {
    const double p = i / 200.0;
    const double q = rcv::hf8_quantile(s, p);
    CHECK(q >= prev);
    CHECK(q >= s.sorted().front());
    CHECK(q <= s.sorted().back());
    std::vector<double> scratch(s.values().begin(), s.values().end());
    CHECK(rcv::hf8_quantile_inplace(scratch, p) == q);
    prev = q;
  }
}

TEST_CASE("sample MAD") {
  CHECK(rcv::sample_mad(Sample({1, 2, 3, 4, 5})) == Approx(1.0));
  // Median of {1,1,1,9} is 1, deviations {0,0,0,8}, type-8 median 0.
  CHECK(rcv::sample_mad(Sample({1, 1, 1, 9})) == 0.0);
  // Type-8 median of {0,1,2,8} deviations: h = 13/6 -> 1 + (1/6)(2 - 1).
  CHECK(rcv::sample_mad(Sample({1, 2, 3, 4, 12})) == Approx(1.0));
  const auto s = rcv::sample(rcv::Normal{0.0, 1.0}, 50, 3);
  std::vector<double> shifted(s.values().begin(), s.values().end());
  for (double& x : shifted) x += 123.0;
  CHECK(rcv::sample_mad(Sample(shifted)) == Approx(rcv::sample_mad(s)).epsilon(1e-12));
}

TEST_CASE("point estimators") {
  const Sample s({2, 4, 4, 4, 5, 5, 7, 9});
  const auto cv = rcv::estimate_cv(s);
  CHECK(cv.value == Approx(std::sqrt(32.0 / 7.0) / 5.0));
  CHECK(cv.n == 8);
  CHECK(cv.asd_hat >= 0.0);
  const Sample textbook({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  // Population-divisor sd is 2, sample-divisor sd is sqrt(32/7).
  CHECK(std::sqrt(textbook.central_moment(2)) / textbook.mean() == Approx(0.4));

  const auto q = rcv::estimate_rcv_q(s);
  CHECK(q.value == Approx(0.75 * (rcv::hf8_quantile(s, 0.75) - rcv::hf8_quantile(s, 0.25)) /
                          rcv::hf8_quantile(s, 0.5)));
  const auto m = rcv::estimate_rcv_m(s);
  CHECK(m.value == Approx(1.4826 * rcv::sample_mad(s) / rcv::hf8_quantile(s, 0.5)));

  CHECK_THROWS_AS((void)rcv::estimate_cv(Sample({-1, 1})), rcv::DegenerateError);
  CHECK_THROWS_AS((void)rcv::estimate_rcv_q(Sample({-1, 0, 1})), rcv::DegenerateError);
  CHECK_THROWS_AS((void)rcv::estimate_rcv_m(Sample({-1, 0, 1})), rcv::DegenerateError);
}

TEST_CASE("estimators are scale invariant") {
  const auto s = rcv::sample(rcv::Exponential{1.0}, 200, 9);
  for (double k : {0.001, 3.0, 1e4}) {
    const auto t = s.scaled(k);
    for (auto measure : {rcv::Measure::Cv, rcv::Measure::RcvQ, rcv::Measure::RcvM}) {
      const auto a = rcv::estimate(s, measure);
      const auto b = rcv::estimate(t, measure);
      CHECK(a.value == Approx(b.value).epsilon(1e-10));
      CHECK(a.asd_hat == Approx(b.asd_hat).epsilon(1e-6));
    }
  }
}

TEST_CASE("robust estimators ignore an extreme maximum") {
  auto s = rcv::sample(rcv::LogNormal{0.0, 1.0}, 101, 4);
  std::vector<double> v(s.values().begin(), s.values().end());
  const auto it = std::max_element(v.begin(), v.end());
  *it *= 1e6;
  const Sample t(v);
  CHECK(rcv::estimate_rcv_q(t).value == rcv::estimate_rcv_q(s).value);
  CHECK(rcv::estimate_rcv_m(t).value == rcv::estimate_rcv_m(s).value);
  CHECK(rcv::estimate_cv(t).value > 5.0 * rcv::estimate_cv(s).value);
}

TEST_CASE("consistency at large n") {
  const auto s = rcv::sample(rcv::Exponential{1.0}, 100000, 2024);
  CHECK(std::fabs(rcv::estimate_rcv_q(s).value - 1.189) < 0.03);
  CHECK(std::fabs(rcv::estimate_rcv_m(s).value - 1.030) < 0.03);
}

TEST_CASE("consistency sweep over sample sizes") {
  for (const rcv::DistributionSpec spec :
       {rcv::DistributionSpec(rcv::LogNormal{0.0, 1.0}), rcv::DistributionSpec(rcv::ChiSquare{5.0}),
        rcv::DistributionSpec(rcv::ParetoII{1.0, 2.5})}) {
    CAPTURE(spec.label());
    const auto truth = rcv::true_measures(spec);
    double prev_q = INFINITY;
    double prev_m = INFINITY;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
      std::vector<double> eq;
      std::vector<double> em;
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = rcv::sample(spec, n, seed * 7919 + n);
        std::vector<double> a(s.values().begin(), s.values().end());
        std::vector<double> b = a;
        eq.push_back(std::fabs(rcv::rcv_q_value(a) - truth.rcv_q));
        em.push_back(std::fabs(rcv::rcv_m_value(b) - truth.rcv_m));
      }
      std::nth_element(eq.begin(), eq.begin() + 10, eq.end());
      std::nth_element(em.begin(), em.begin() + 10, em.end());
      CHECK(eq[10] < prev_q);
      CHECK(em[10] < prev_m);
      prev_q = eq[10];
      prev_m = em[10];
    }
  }
}

TEST_CASE("kernel quantile density") {
  const auto u = rcv::sample(rcv::Uniform{0.0, 1.0}, 100000, 12);
  CHECK(rcv::quantile_density_estimate(u, 0.5) == Approx(1.0).epsilon(0.05));
  const auto e = rcv::sample(rcv::Exponential{1.0}, 100000, 13);
  CHECK(rcv::quantile_density_estimate(e, 0.5) == Approx(2.0).epsilon(0.05));
  CHECK(rcv::quantile_density_estimate(e, 0.75) == Approx(4.0).epsilon(0.05));
  CHECK(rcv::quantile_density_estimate(e.scaled(3.0), 0.5, 0.1) ==
        Approx(3.0 * rcv::quantile_density_estimate(e, 0.5, 0.1)).epsilon(1e-12));
  CHECK_THROWS_AS((void)rcv::quantile_density_estimate(Sample({4, 4, 4, 4, 4}), 0.5),
                  rcv::DegenerateError);
  CHECK_THROWS_AS((void)rcv::quantile_density_estimate(e, 0.1, 0.2), rcv::DomainError);
}

TEST_CASE("kernel estimate matches a direct integral over the type-8 quantile function") {
  const auto s = rcv::sample(rcv::Weibull{1.0, 1.5}, 60, 21);
  const double p = 0.4;
  const double h = 0.15;
  // Riemann-Stieltjes sum on a fine grid: sum K_h(u - p) [Q(u + du) - Q(u)].
  const int steps = 400000;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = p - h + 2.0 * h * i / steps;
    const double b = p - h + 2.0 * h * (i + 1) / steps;
    const double t = (0.5 * (a + b) - p) / h;
    const double k = 0.75 * (1.0 - t * t) / h;
    total += k * (rcv::hf8_quantile(s, b) - rcv::hf8_quantile(s, a));
  }
  CHECK(rcv::quantile_density_estimate(s, p, h) == Approx(total).epsilon(1e-5));
}

TEST_CASE("QOR bandwidth") {
  const double h100 = rcv::bandwidth_qor(0.5, 100);
  const double h200 = rcv::bandwidth_qor(0.5, 200);
  CHECK(h200 / h100 == Approx(std::pow(2.0, -0.2)).epsilon(1e-12));
  CHECK(h100 > 0.0);
  CHECK(h100 < 0.45);
  // At p = 0.9 the unclamped value exceeds 0.09 and the clamp engages.
  const double z = rcv::normal_quantile(0.9);
  const double phi = rcv::normal_pdf(z);
  const double raw = std::pow(0.15, 0.2) * std::pow(phi * phi / (1 + 2 * z * z), 0.4);
  CHECK(raw > 0.09);
  CHECK(rcv::bandwidth_qor(0.9, 100) == Approx(0.09).epsilon(1e-12));
  // A normal reference spec reproduces the built-in normal reference.
  const rcv::DistributionSpec normal = rcv::Normal{3.0, 2.0};
  CHECK(rcv::bandwidth_qor(0.3, 500, normal) == Approx(rcv::bandwidth_qor(0.3, 500)).epsilon(1e-5));
  // Exponential: g = 1/(1-p), g'' = 2/(1-p)^3, QOR = (1-p)^2 / 2.
  const double expected = std::pow(15.0 / 500.0, 0.2) * std::pow(0.25 * 0.25 / 2.0, 0.4);
  CHECK(rcv::bandwidth_qor(0.75, 500, rcv::DistributionSpec(rcv::Exponential{1.0})) ==
        Approx(std::min(expected, 0.225)).epsilon(1e-5));
}
