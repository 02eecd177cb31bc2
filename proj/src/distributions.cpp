#include "rcv/distributions.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "rcv/errors.hpp"
#include "rcv/numerics.hpp"
#include "rcv/random.hpp"
#include "rcv/special_functions.hpp"

namespace rcv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be finite and strictly positive");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: probability must lie in (0,1), got " + std::to_string(p));
  }
}

void validate(const Family& family) {
  std::visit(overloaded{
                 [](const Normal& d) {
                   require_finite(d.mean, "normal mean");
                   require_positive(d.sd, "normal sd");
                 },
                 [](const LogNormal& d) {
                   require_finite(d.meanlog, "lognormal meanlog");
                   require_positive(d.sdlog, "lognormal sdlog");
                 },
                 [](const Exponential& d) { require_positive(d.rate, "exponential rate"); },
                 [](const Uniform& d) {
                   require_finite(d.lower, "uniform lower");
                   require_finite(d.upper, "uniform upper");
                   if (!(d.lower < d.upper)) throw ParameterError("uniform requires lower < upper");
                 },
                 [](const Weibull& d) {
                   require_positive(d.scale, "weibull scale");
                   require_positive(d.shape, "weibull shape");
                 },
                 [](const ChiSquare& d) { require_positive(d.dof, "chi-square dof"); },
                 [](const ParetoII& d) {
                   require_positive(d.scale, "pareto2 scale");
                   require_positive(d.shape, "pareto2 shape");
                 },
                 [](const GldFkml& d) { d.validate(); },
             },
             family);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Central moments from raw moments m1..m4.
MomentSet from_raw(double m1, double m2, double m3, double m4) {
  MomentSet out;
  out.mean = m1;
  out.variance = m2 - m1 * m1;
  out.mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
  out.mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  return out;
}

double gld_pdf_or_zero(const GldFkml& g, double x) {
  if (x < gld_quantile(g, 1e-12) || x > gld_quantile(g, 1.0 - 1e-12)) return 0.0;
  return gld_density_at(g, x);
}

}  // namespace

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) {
  validate(family_);
}

std::string DistributionSpec::label() const {
  auto f = format_number;
  return std::visit(
      overloaded{
          [&](const Normal& d) { return "normal(" + f(d.mean) + "," + f(d.sd) + ")"; },
          [&](const LogNormal& d) { return "lnorm(" + f(d.meanlog) + "," + f(d.sdlog) + ")"; },
          [&](const Exponential& d) { return "exp(" + f(d.rate) + ")"; },
          [&](const Uniform& d) { return "unif(" + f(d.lower) + "," + f(d.upper) + ")"; },
          [&](const Weibull& d) { return "weibull(" + f(d.scale) + "," + f(d.shape) + ")"; },
          [&](const ChiSquare& d) { return "chisq(" + f(d.dof) + ")"; },
          [&](const ParetoII& d) { return "pareto2(" + f(d.scale) + "," + f(d.shape) + ")"; },
          [&](const GldFkml& d) {
            return "gld(" + f(d.location) + "," + f(d.inverse_scale) + "," + f(d.left_shape) +
                   "," + f(d.right_shape) + ")";
          },
      },
      family_);
}

double DistributionSpec::lower_support() const {
  return std::visit(overloaded{
                        [](const Normal&) { return -kInf; },
                        [](const Uniform& d) { return d.lower; },
                        [](const GldFkml& d) { return d.lower_support(); },
                        [](const auto&) { return 0.0; },
                    },
                    family_);
}

double DistributionSpec::upper_support() const {
  return std::visit(overloaded{
                        [](const Uniform& d) { return d.upper; },
                        [](const GldFkml& d) { return d.upper_support(); },
                        [](const auto&) { return kInf; },
                    },
                    family_);
}

DistributionSpec parse_distribution(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  const auto open = s.find('(');
  if (open == std::string::npos || s.empty() || s.back() != ')') {
    throw ParameterError("cannot parse distribution '" + std::string(text) +
                         "': expected name(arg,...)");
  }
  const std::string name = s.substr(0, open);
  std::vector<double> args;
  std::stringstream body(s.substr(open + 1, s.size() - open - 2));
  std::string token;
  while (std::getline(body, token, ',')) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
      throw ParameterError("cannot parse distribution argument '" + token + "' in '" +
                           std::string(text) + "'");
    }
    args.push_back(v);
  }
  auto want = [&](std::size_t count) {
    if (args.size() != count) {
      throw ParameterError(name + " expects " + std::to_string(count) + " argument(s), got " +
                           std::to_string(args.size()));
    }
  };
  if (name == "normal" || name == "norm") {
    want(2);
    return Normal{args[0], args[1]};
  }
  if (name == "lnorm" || name == "lognormal") {
    want(2);
    return LogNormal{args[0], args[1]};
  }
  if (name == "exp") {
    want(1);
    return Exponential{args[0]};
  }
  if (name == "unif" || name == "uniform") {
    want(2);
    return Uniform{args[0], args[1]};
  }
  if (name == "weibull") {
    want(2);
    return Weibull{args[0], args[1]};
  }
  if (name == "chisq") {
    want(1);
    return ChiSquare{args[0]};
  }
  if (name == "pareto2") {
    want(2);
    return ParetoII{args[0], args[1]};
  }
  if (name == "gld") {
    want(4);
    return GldFkml{args[0], args[1], args[2], args[3]};
  }
  throw ParameterError("unknown distribution family '" + name + "'");
}

double pdf(const DistributionSpec& spec, double x) {
  return std::visit(
      overloaded{
          [x](const Normal& d) { return normal_pdf((x - d.mean) / d.sd) / d.sd; },
          [x](const LogNormal& d) {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - d.meanlog) / d.sdlog;
            return normal_pdf(z) / (d.sdlog * x);
          },
          [x](const Exponential& d) { return x < 0.0 ? 0.0 : d.rate * std::exp(-d.rate * x); },
          [x](const Uniform& d) {
            return (x < d.lower || x > d.upper) ? 0.0 : 1.0 / (d.upper - d.lower);
          },
          [x](const Weibull& d) {
            if (x < 0.0) return 0.0;
            if (x == 0.0) return d.shape == 1.0 ? 1.0 / d.scale : (d.shape < 1.0 ? kInf : 0.0);
            const double z = x / d.scale;
            return d.shape / d.scale * std::pow(z, d.shape - 1.0) * std::exp(-std::pow(z, d.shape));
          },
          [x](const ChiSquare& d) { return chisq_pdf(d.dof, x); },
          [x](const ParetoII& d) {
            if (x < 0.0) return 0.0;
            return d.shape / d.scale * std::pow(1.0 + x / d.scale, -(d.shape + 1.0));
          },
          [x](const GldFkml& d) { return gld_pdf_or_zero(d, x); },
      },
      spec.family());
}

double cdf(const DistributionSpec& spec, double x) {
  return std::visit(
      overloaded{
          [x](const Normal& d) { return normal_cdf((x - d.mean) / d.sd); },
          [x](const LogNormal& d) {
            if (x <= 0.0) return 0.0;
            return normal_cdf((std::log(x) - d.meanlog) / d.sdlog);
          },
          [x](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
          [x](const Uniform& d) {
            if (x <= d.lower) return 0.0;
            if (x >= d.upper) return 1.0;
            return (x - d.lower) / (d.upper - d.lower);
          },
          [x](const Weibull& d) {
            return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / d.scale, d.shape));
          },
          [x](const ChiSquare& d) { return chisq_cdf(d.dof, x); },
          [x](const ParetoII& d) {
            return x <= 0.0 ? 0.0 : -std::expm1(-d.shape * std::log1p(x / d.scale));
          },
          [x](const GldFkml& d) { return gld_cdf(d, x); },
      },
      spec.family());
}

double quantile(const DistributionSpec& spec, double p) {
  require_probability(p);
  return std::visit(
      overloaded{
          [p](const Normal& d) { return d.mean + d.sd * normal_quantile(p); },
          [p](const LogNormal& d) { return std::exp(d.meanlog + d.sdlog * normal_quantile(p)); },
          [p](const Exponential& d) { return -std::log1p(-p) / d.rate; },
          [p](const Uniform& d) { return d.lower + p * (d.upper - d.lower); },
          [p](const Weibull& d) { return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape); },
          [p](const ChiSquare& d) { return chisq_quantile(d.dof, p); },
          [p](const ParetoII& d) {
            return d.scale * std::expm1(-std::log1p(-p) / d.shape);
          },
          [p](const GldFkml& d) { return gld_quantile(d, p); },
      },
      spec.family());
}

double quantile_density(const DistributionSpec& spec, double p) {
  if (const auto* g = std::get_if<GldFkml>(&spec.family())) return gld_quantile_density(*g, p);
  const double f = pdf(spec, quantile(spec, p));
  if (!(f > 0.0)) throw DomainError("quantile_density: zero density at the quantile");
  return 1.0 / f;
}

MomentSet central_moments(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const Normal& d) {
            const double v = d.sd * d.sd;
            return MomentSet{d.mean, v, 0.0, 3.0 * v * v};
          },
          [](const LogNormal& d) {
            const double w = std::exp(d.sdlog * d.sdlog);
            const double e = std::exp(d.meanlog);
            const double wm1 = std::expm1(d.sdlog * d.sdlog);
            return MomentSet{e * std::sqrt(w), e * e * w * wm1,
                             e * e * e * std::pow(w, 1.5) * wm1 * wm1 * (w + 2.0),
                             std::pow(e, 4) * w * w * wm1 * wm1 *
                                 (w * w * w * w + 2.0 * w * w * w + 3.0 * w * w - 3.0)};
          },
          [](const Exponential& d) {
            const double s = 1.0 / d.rate;
            return MomentSet{s, s * s, 2.0 * s * s * s, 9.0 * s * s * s * s};
          },
          [](const Uniform& d) {
            const double w = d.upper - d.lower;
            return MomentSet{0.5 * (d.lower + d.upper), w * w / 12.0, 0.0,
                             w * w * w * w / 80.0};
          },
          [](const Weibull& d) {
            std::array<double, 5> raw{};
            for (int k = 1; k <= 4; ++k) {
              raw[k] = std::pow(d.scale, k) * std::tgamma(1.0 + k / d.shape);
            }
            return from_raw(raw[1], raw[2], raw[3], raw[4]);
          },
          [](const ChiSquare& d) {
            const double v = d.dof;
            return MomentSet{v, 2.0 * v, 8.0 * v, 12.0 * v * v + 48.0 * v};
          },
          [](const ParetoII& d) {
            // E[X^k] = scale^k k! / prod_{j=1..k} (shape - j), finite iff shape > k.
            std::array<std::optional<double>, 5> raw{};
            double factor = 1.0;
            for (int k = 1; k <= 4; ++k) {
              if (!(d.shape > k)) break;
              factor *= d.scale * k / (d.shape - k);
              raw[k] = factor;
            }
            MomentSet out;
            if (!raw[1]) return out;
            const double m1 = *raw[1];
            out.mean = m1;
            if (!raw[2]) return out;
            const double m2 = *raw[2];
            out.variance = m2 - m1 * m1;
            if (!raw[3]) return out;
            const double m3 = *raw[3];
            out.mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
            if (!raw[4]) return out;
            out.mu4 = *raw[4] - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
            return out;
          },
          [](const GldFkml& d) { return gld_moments(d); },
      },
      spec.family());
}

double true_mad(const DistributionSpec& spec) {
  const double m = quantile(spec, 0.5);
  const double lo = spec.lower_support();
  const double hi = spec.upper_support();

  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;

  auto mass_within = [&](double radius) {
    // Density edges (support bounds) become piece boundaries.
    std::vector<double> points{0.0, radius};
    if (std::isfinite(lo) && m - lo > 0.0 && m - lo < radius) points.push_back(m - lo);
    if (std::isfinite(hi) && hi - m > 0.0 && hi - m < radius) points.push_back(hi - m);
    auto integrand = [&](double x) { return pdf(spec, m + x) + pdf(spec, m - x); };
    const auto r = integrate_piecewise(integrand, points, opt);
    return r.value - 0.5;
  };

  double upper = std::fabs(quantile(spec, 0.75) + m);
  if (!(upper > 0.0)) upper = std::fabs(quantile(spec, 0.75) - m);
  int doublings = 0;
  double f_upper = mass_within(upper);
  while (f_upper < 0.0) {
    if (++doublings > 60) {
      throw NumericalError("true_mad: root not bracketed after 60 doublings of " +
                           std::to_string(upper) + " for " + spec.label());
    }
    upper *= 2.0;
    f_upper = mass_within(upper);
  }
  RootOptions ropt;
  ropt.abs_tol = 1e-13;
  return find_root(mass_within, 0.0, upper, ropt);
}

TrueMeasures true_measures(const DistributionSpec& spec) {
  TrueMeasures out{};
  out.median = quantile(spec, 0.5);
  if (out.median == 0.0) {
    throw DegenerateError("true_measures: median of " + spec.label() + " is zero");
  }
  out.iqr = quantile(spec, 0.75) - quantile(spec, 0.25);
  out.mad = true_mad(spec);
  out.rcv_q = kRcvQFactor * out.iqr / out.median;
  out.rcv_m = kMadFactor * out.mad / out.median;
  const auto moments = central_moments(spec);
  if (moments.mean && moments.variance && *moments.mean != 0.0) {
    out.cv = std::sqrt(*moments.variance) / *moments.mean;
  }
  return out;
}

Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw SizeError("sample: n must be at least 2");
  std::mt19937_64 engine(seed);
  std::vector<double> draws(n);
  for (auto& x : draws) x = quantile(spec, unit_uniform(engine));
  return Sample(std::move(draws));
}

}  // namespace rcv
