#include "rcv/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rcv/errors.hpp"

namespace rcv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require_probability(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(who) + ": probability must lie in (0,1), got " +
                      std::to_string(p));
  }
}

// Acklam's rational approximation; relative error ~1e-9 before refinement.
double acklam_start(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Series for P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericalError("gamma_p: series did not converge");
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NumericalError("gamma_q: continued fraction did not converge");
}

double gamma_density(double a, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  require_probability(p, "normal_quantile");
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double x = acklam_start(p);
  for (int i = 0; i < 2; ++i) {
    const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
    const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chisq_pdf(double dof, double x) {
  if (!(dof > 0.0)) throw DomainError("chisq_pdf: degrees of freedom must be positive");
  if (x <= 0.0) {
    if (x == 0.0 && dof == 2.0) return 0.5;
    return 0.0;
  }
  return 0.5 * gamma_density(0.5 * dof, 0.5 * x);
}

double chisq_cdf(double dof, double x) {
  if (!(dof > 0.0)) throw DomainError("chisq_cdf: degrees of freedom must be positive");
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chisq_quantile(double dof, double p) {
  if (!(dof > 0.0)) throw DomainError("chisq_quantile: degrees of freedom must be positive");
  require_probability(p, "chisq_quantile");

  // Work with y = x/2 ~ Gamma(a, 1).
  const double a = 0.5 * dof;
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;

  const double z = normal_quantile(p);
  const double k = 2.0 / (9.0 * dof);
  double y = 0.5 * dof * std::pow(1.0 - k + z * std::sqrt(k), 3);
  if (!(y > 0.0) || (!upper && p < 0.05 && a < 2.0)) {
    // Small-x expansion P(a,y) ~ y^a / Gamma(a+1).
    const double small = std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
    if (!(y > 0.0) || small < y) y = small;
  }

  // Residual r(y) is increasing in y in both branches.
  auto residual = [&](double v) {
    return upper ? target - gamma_q(a, v) : gamma_p(a, v) - target;
  };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    const double r = residual(y);
    if (r == 0.0) return 2.0 * y;
    if (r < 0.0) lo = y; else hi = y;

    const double dens = gamma_density(a, y);
    double next = dens > 0.0 ? y - r / dens : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * y + 1.0;
    }
    if (std::fabs(next - y) <= 4.0 * kEps * y) return 2.0 * next;
    if (std::isfinite(hi) && hi - lo <= 4.0 * kEps * hi) return lo + hi;
    y = next;
  }
  throw NumericalError("chisq_quantile: iteration limit reached");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace rcv
