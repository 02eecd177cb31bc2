#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "rcv/errors.hpp"
#include "rcv/special_functions.hpp"

using doctest::Approx;

TEST_CASE("normal quantile constants") {
  CHECK(rcv::normal_quantile(0.975) == Approx(1.959964).epsilon(1e-6));
  CHECK(rcv::normal_quantile(0.75) == Approx(0.674490).epsilon(1e-6));
  CHECK(rcv::normal_quantile(0.5) == 0.0);
  CHECK(1.0 / rcv::normal_quantile(0.75) == Approx(1.4826).epsilon(1e-4));
}

TEST_CASE("normal functions agree with Boost.Math") {
  const boost::math::normal_distribution<double> nd;
  for (double p : {1e-300, 1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999,
                   1 - 1e-9}) {
    const double ref = boost::math::quantile(nd, p);
    CHECK(std::fabs(rcv::normal_quantile(p) - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
  }
  for (double x : {-30.0, -8.0, -2.5, -0.3, 0.0, 0.7, 3.0, 9.0}) {
    const double ref = boost::math::cdf(nd, x);
    CHECK(rcv::normal_cdf(x) == Approx(ref).epsilon(1e-13));
    CHECK(rcv::normal_pdf(x) == Approx(boost::math::pdf(nd, x)).epsilon(1e-13));
  }
}

TEST_CASE("normal quantile rejects probabilities outside (0,1)") {
  CHECK_THROWS_AS((void)rcv::normal_quantile(0.0), rcv::DomainError);
  CHECK_THROWS_AS((void)rcv::normal_quantile(1.0), rcv::DomainError);
  CHECK_THROWS_AS((void)rcv::normal_quantile(std::nan("")), rcv::DomainError);
}

TEST_CASE("incomplete gamma agrees with Boost.Math") {
  for (double a : {0.1, 0.5, 1.0, 2.5, 10.0, 49.5, 500.0}) {
    for (double x : {1e-3, 0.5, 1.0, 3.0, 12.0, 60.0, 520.0}) {
      CHECK(rcv::gamma_p(a, x) == Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
      const double q = boost::math::gamma_q(a, x);
      if (q > 1e-280) CHECK(rcv::gamma_q(a, x) == Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("chi-square quantile") {
  CHECK(rcv::chisq_quantile(2.0, 0.5) == Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(rcv::chisq_quantile(50.0, 0.975) == Approx(71.420).epsilon(1e-5));
  CHECK(rcv::chisq_quantile(50.0, 0.025) == Approx(32.357).epsilon(2e-5));
  for (double nu : {0.5, 1.0, 2.0, 4.0, 9.0, 49.0, 99.0, 999.0, 9999.0}) {
    const boost::math::chi_squared_distribution<double> chi(nu);
    for (double p : {1e-8, 0.001, 0.025, 0.3, 0.5, 0.9, 0.975, 0.999999}) {
      const double ref = boost::math::quantile(chi, p);
      CHECK(rcv::chisq_quantile(nu, p) == Approx(ref).epsilon(1e-9));
      CHECK(rcv::chisq_cdf(nu, ref) == Approx(p).epsilon(1e-9));
    }
    CHECK(rcv::chisq_pdf(nu, 1.3) == Approx(boost::math::pdf(chi, 1.3)).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)rcv::chisq_quantile(0.0, 0.5), rcv::DomainError);
  CHECK_THROWS_AS((void)rcv::chisq_quantile(3.0, 1.0), rcv::DomainError);
}

TEST_CASE("log beta agrees with Boost.Math") {
  for (double a : {0.3, 1.0, 2.7, 11.0}) {
    for (double b : {0.75, 1.0, 4.2, 30.0}) {
      CHECK(rcv::log_beta(a, b) == Approx(std::log(boost::math::beta(a, b))).epsilon(1e-12));
    }
  }
}
