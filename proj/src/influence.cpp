#include "rcv/influence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rcv/errors.hpp"

namespace rcv {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("influence: probability must lie in (0,1)");
}

double checked_g(const DistributionSpec& spec, double p) {
  const double g = quantile_density(spec, p);
  if (!std::isfinite(g) || g <= 0.0) {
    throw DegenerateError("influence: density is zero at the quantile");
  }
  return g;
}

double step(double x, double p, double xp, double g) { return (p - (x < xp ? 1.0 : 0.0)) * g; }

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite result");
  return v;
}

// Quantile of (1 - eps) F + eps delta_x.
double mixture_quantile(const DistributionSpec& spec, double x, double eps, double p) {
  const double scaled = p / (1.0 - eps);
  if (scaled < 1.0) {
    const double t = quantile(spec, scaled);
    if (t < x) return t;
  }
  if ((1.0 - eps) * cdf(spec, x) + eps >= p) return x;
  return quantile(spec, (p - eps) / (1.0 - eps));
}

// MAD of (1 - eps) F + eps delta_x about the mixture median `center`.
double mixture_mad(const DistributionSpec& spec, double x, double eps, double center) {
  auto inner = [&](double r) { return (1.0 - eps) * (cdf(spec, center + r) - cdf(spec, center - r)); };
  const double scale = quantile(spec, 0.75) - quantile(spec, 0.25);
  auto solve = [&](double target) {
    double hi = scale > 0.0 ? scale : 1.0;
    for (int i = 0; i < 200 && inner(hi) < target; ++i) hi *= 2.0;
    return find_root([&](double r) { return inner(r) - target; }, 0.0, hi,
                     RootOptions{1e-15, 500});
  };
  const double atom = std::fabs(x - center);
  const double without = solve(0.5);
  if (without < atom) return without;
  if (inner(atom) + eps >= 0.5) return atom;
  return solve(0.5 - eps);
}

}  // namespace

FunctionalKind FunctionalKind::quantile(double p) {
  check_probability(p);
  return FunctionalKind(Tag::Quantile, p);
}

FunctionalKind FunctionalKind::quantile_ratio(double p, double q) {
  check_probability(p);
  check_probability(q);
  return FunctionalKind(Tag::QuantileRatio, p, q);
}

std::string FunctionalKind::label() const {
  switch (tag_) {
    case Tag::Mean:
      return "mean";
    case Tag::Variance:
      return "variance";
    case Tag::Cv:
      return "cv";
    case Tag::Quantile:
      return "quantile(" + std::to_string(p_) + ")";
    case Tag::QuantileRatio:
      return "quantile_ratio(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
    case Tag::RcvQ:
      return "rcv_q";
    case Tag::Mad:
      return "mad";
    case Tag::RcvM:
      return "rcv_m";
  }
  return "unknown";
}

InfluenceEvaluator::InfluenceEvaluator(DistributionSpec spec) : spec_(std::move(spec)) {
  const MomentSet moments = central_moments(spec_);
  mean_ = moments.mean;
  variance_ = moments.variance;
  q1_ = rcv::quantile(spec_, 0.25);
  median_ = rcv::quantile(spec_, 0.5);
  q3_ = rcv::quantile(spec_, 0.75);
  g1_ = rcv::quantile_density(spec_, 0.25);
  g_median_ = rcv::quantile_density(spec_, 0.5);
  g3_ = rcv::quantile_density(spec_, 0.75);
  mad_ = true_mad(spec_);
  const double f_lower = pdf(spec_, median_ - mad_);
  const double f_upper = pdf(spec_, median_ + mad_);
  c1_ = f_lower + f_upper;
  c3_ = f_lower - f_upper;
}

double InfluenceEvaluator::require_mean() const {
  if (!mean_) throw DomainError("influence: the mean does not exist for " + spec_.label());
  return *mean_;
}

double InfluenceEvaluator::require_variance() const {
  if (!variance_) throw DomainError("influence: the variance does not exist for " + spec_.label());
  return *variance_;
}

double InfluenceEvaluator::mean(double x) const { return x - require_mean(); }

double InfluenceEvaluator::variance(double x) const {
  const double d = x - require_mean();
  return d * d - require_variance();
}

double InfluenceEvaluator::cv(double x) const {
  const double mu = require_mean();
  const double var = require_variance();
  if (mu == 0.0) throw DegenerateError("influence: CV undefined for zero mean");
  const double cv = std::sqrt(var) / mu;
  return cv * (variance(x) / (2.0 * var) - mean(x) / mu);
}

double InfluenceEvaluator::quantile(double x, double p) const {
  check_probability(p);
  return step(x, p, rcv::quantile(spec_, p), checked_g(spec_, p));
}

double InfluenceEvaluator::quantile_ratio(double x, double p, double q) const {
  check_probability(p);
  check_probability(q);
  const double xp = rcv::quantile(spec_, p);
  const double xq = rcv::quantile(spec_, q);
  if (xp == 0.0 || xq == 0.0) throw DegenerateError("influence: zero quantile in a ratio");
  const double ifp = step(x, p, xp, checked_g(spec_, p));
  const double ifq = step(x, q, xq, checked_g(spec_, q));
  return (xp / xq) * (ifp / xp - ifq / xq);
}

double InfluenceEvaluator::rcv_q(double x) const {
  if (median_ == 0.0) throw DegenerateError("influence: median is zero");
  if (!std::isfinite(g1_) || !std::isfinite(g_median_) || !std::isfinite(g3_)) {
    throw DegenerateError("influence: density is zero at a quartile");
  }
  const double if1 = step(x, 0.25, q1_, g1_);
  const double ifm = step(x, 0.5, median_, g_median_);
  const double if3 = step(x, 0.75, q3_, g3_);
  const double upper = (q3_ / median_) * (if3 / q3_ - ifm / median_);
  const double lower = (q1_ / median_) * (if1 / q1_ - ifm / median_);
  return kRcvQFactor * (upper - lower);
}

double InfluenceEvaluator::mad(double x) const {
  if (!(c1_ > 0.0)) throw DegenerateError("influence: density is zero at m +/- MAD");
  if (!std::isfinite(g_median_)) throw DegenerateError("influence: density is zero at the median");
  const double inside = (x >= median_ - mad_ && x < median_ + mad_) ? 1.0 : 0.0;
  const double if_median = step(x, 0.5, median_, g_median_);
  return kMadFactor * (0.5 - inside + c3_ * if_median) / c1_;
}

double InfluenceEvaluator::rcv_m(double x) const {
  if (median_ == 0.0) throw DegenerateError("influence: median is zero");
  const double ratio = kMadFactor * mad_ / median_;
  return (mad(x) - ratio * step(x, 0.5, median_, g_median_)) / median_;
}

double InfluenceEvaluator::operator()(const FunctionalKind& kind, double x) const {
  using Tag = FunctionalKind::Tag;
  switch (kind.tag()) {
    case Tag::Mean:
      return mean(x);
    case Tag::Variance:
      return variance(x);
    case Tag::Cv:
      return cv(x);
    case Tag::Quantile:
      return quantile(x, kind.p());
    case Tag::QuantileRatio:
      return quantile_ratio(x, kind.p(), kind.q());
    case Tag::RcvQ:
      return rcv_q(x);
    case Tag::Mad:
      return mad(x);
    case Tag::RcvM:
      return rcv_m(x);
  }
  throw ParameterError("influence: unknown functional");
}

std::vector<double> InfluenceEvaluator::breakpoints(const FunctionalKind& kind) const {
  using Tag = FunctionalKind::Tag;
  switch (kind.tag()) {
    case Tag::Mean:
    case Tag::Variance:
    case Tag::Cv:
      return mean_ ? std::vector<double>{*mean_} : std::vector<double>{};
    case Tag::Quantile:
      return {rcv::quantile(spec_, kind.p())};
    case Tag::QuantileRatio:
      return {rcv::quantile(spec_, kind.p()), rcv::quantile(spec_, kind.q())};
    case Tag::RcvQ:
      return {q1_, median_, q3_};
    case Tag::Mad:
    case Tag::RcvM:
      return {median_ - mad_, median_, median_ + mad_};
  }
  return {};
}

double if_mean(double x, const DistributionSpec& spec) { return InfluenceEvaluator(spec).mean(x); }
double if_variance(double x, const DistributionSpec& spec) {
  return InfluenceEvaluator(spec).variance(x);
}
double if_cv(double x, const DistributionSpec& spec) { return InfluenceEvaluator(spec).cv(x); }
double if_quantile(double x, double p, const DistributionSpec& spec) {
  check_probability(p);
  return step(x, p, quantile(spec, p), checked_g(spec, p));
}
double if_quantile_ratio(double x, double p, double q, const DistributionSpec& spec) {
  return InfluenceEvaluator(spec).quantile_ratio(x, p, q);
}
double if_rcv_q(double x, const DistributionSpec& spec) { return InfluenceEvaluator(spec).rcv_q(x); }
double if_mad(double x, const DistributionSpec& spec) { return InfluenceEvaluator(spec).mad(x); }
double if_rcv_m(double x, const DistributionSpec& spec) { return InfluenceEvaluator(spec).rcv_m(x); }

double functional_at_mixture(const FunctionalKind& kind, const DistributionSpec& spec, double x,
                             double eps) {
  using Tag = FunctionalKind::Tag;
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("functional_at_mixture: eps must lie in [0,1)");
  const MomentSet moments = central_moments(spec);
  auto mixture_mean = [&] {
    if (!moments.mean) throw DomainError("functional_at_mixture: the mean does not exist");
    return (1.0 - eps) * *moments.mean + eps * x;
  };
  auto mixture_variance = [&] {
    if (!moments.mean || !moments.variance) {
      throw DomainError("functional_at_mixture: the variance does not exist");
    }
    const double d = x - *moments.mean;
    return (1.0 - eps) * *moments.variance + eps * (1.0 - eps) * d * d;
  };
  auto q = [&](double p) { return mixture_quantile(spec, x, eps, p); };
  auto standardized_mad = [&](double center) {
    return kMadFactor * mixture_mad(spec, x, eps, center);
  };

  switch (kind.tag()) {
    case Tag::Mean:
      return mixture_mean();
    case Tag::Variance:
      return mixture_variance();
    case Tag::Cv:
      return std::sqrt(mixture_variance()) / mixture_mean();
    case Tag::Quantile:
      return q(kind.p());
    case Tag::QuantileRatio:
      return q(kind.p()) / q(kind.q());
    case Tag::RcvQ:
      return kRcvQFactor * (q(0.75) - q(0.25)) / q(0.5);
    case Tag::Mad:
      return standardized_mad(q(0.5));
    case Tag::RcvM: {
      const double m = q(0.5);
      return standardized_mad(m) / m;
    }
  }
  throw ParameterError("functional_at_mixture: unknown functional");
}

double if_numeric_check(const FunctionalKind& kind, double x, const DistributionSpec& spec,
                        double eps) {
  if (!(eps > 0.0 && eps <= 0.01)) throw DomainError("if_numeric_check: eps must lie in (0, 0.01]");
  const double base = functional_at_mixture(kind, spec, x, 0.0);
  const double moved = functional_at_mixture(kind, spec, x, eps);
  return finite_or_throw((moved - base) / eps, "if_numeric_check");
}

QuadratureResult expectation(const DistributionSpec& spec, const ScalarFunction& h,
                             std::vector<double> breakpoints) {
  const double lo = spec.lower_support();
  const double hi = spec.upper_support();
  breakpoints.push_back(quantile(spec, 0.5));
  std::vector<double> pts;
  for (double b : breakpoints) {
    if (b > lo && b < hi && std::isfinite(b)) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto weighted = [&](double x) {
    if (!std::isfinite(x)) return 0.0;
    const double f = pdf(spec, x);
    return f == 0.0 ? 0.0 : h(x) * f;
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.max_intervals = 20000;

  QuadratureResult total{0.0, 0.0, 0, true};
  auto add = [&total](const QuadratureResult& r) {
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  };

  const double spread = quantile(spec, 0.75) - quantile(spec, 0.25);
  const double s = spread > 0.0 ? spread : 1.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto tail = [&](double x, double w) {
    const double jacobian = s * std::exp(w);
    if (!std::isfinite(x) || !std::isfinite(jacobian)) return 0.0;
    return weighted(x) * jacobian;
  };

  if (std::isfinite(lo)) {
    add(integrate(weighted, lo, pts.front(), opt));
  } else {
    const double b = pts.front();
    add(integrate([&](double w) { return tail(b - s * std::expm1(w), w); }, 0.0, inf, opt));
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) add(integrate(weighted, pts[i], pts[i + 1], opt));
  if (std::isfinite(hi)) {
    add(integrate(weighted, pts.back(), hi, opt));
  } else {
    const double b = pts.back();
    add(integrate([&](double w) { return tail(b + s * std::expm1(w), w); }, 0.0, inf, opt));
  }
  return total;
}

double if_expectation(const FunctionalKind& kind, const DistributionSpec& spec) {
  const InfluenceEvaluator eval(spec);
  const auto r =
      expectation(spec, [&](double x) { return eval(kind, x); }, eval.breakpoints(kind));
  if (!r.converged) {
    throw NumericalError("if_expectation: quadrature did not converge for " + kind.label() +
                         " under " + spec.label() + " (error estimate " +
                         std::to_string(r.abs_error) + ")");
  }
  return r.value;
}

void write_if_curve(std::ostream& out, const DistributionSpec& spec, int points) {
  if (points < 2) throw ParameterError("write_if_curve: need at least two points");
  const InfluenceEvaluator eval(spec);
  const double a = quantile(spec, 0.001);
  const double b = quantile(spec, 0.999);
  bool cv_defined = true;
  try {
    (void)eval.cv(a);
  } catch (const DomainError&) {
    cv_defined = false;
  }
  out << "x,if_cv,if_rcv_q,if_rcv_m\n";
  char line[160];
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    char cv_text[40] = "undefined";
    if (cv_defined) std::snprintf(cv_text, sizeof cv_text, "%.10g", eval.cv(x));
    std::snprintf(line, sizeof line, "%.10g,%s,%.10g,%.10g\n", x, cv_text, eval.rcv_q(x),
                  eval.rcv_m(x));
    out << line;
  }
}

}  // namespace rcv
