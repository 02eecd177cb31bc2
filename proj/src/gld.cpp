#include "rcv/gld.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "rcv/errors.hpp"
#include "rcv/numerics.hpp"
#include "rcv/sample.hpp"
#include "rcv/special_functions.hpp"

namespace rcv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShapeLimit = 1e-10;     // below this (p^s - 1)/s -> log p
constexpr double kClosedFormMin = 0.05;   // closed-form moments need |shape| >= this
constexpr double kCdfEdge = 1e-12;
constexpr double kFeasibleShape = -0.25;  // fourth moment requires shape > -1/4

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("gld: probability must lie in (0,1), got " + std::to_string(p));
  }
}

// (p^s - 1)/s given log p, with the logarithmic limit near s = 0.
double shape_term(double log_p, double s) {
  if (std::fabs(s) < kShapeLimit) return log_p;
  return std::expm1(s * log_p) / s;
}

// Quantile of the standardized variable S = (p^a - 1)/a - ((1-p)^b - 1)/b.
double standard_quantile(double p, double q, double a, double b) {
  const double log_p = p < 0.5 ? std::log(p) : std::log1p(-q);
  const double log_q = q < 0.5 ? std::log(q) : std::log1p(-p);
  return shape_term(log_p, a) - shape_term(log_q, b);
}

double binomial(int n, int k) {
  static constexpr std::array<std::array<double, 5>, 5> table{{{1, 0, 0, 0, 0},
                                                               {1, 1, 0, 0, 0},
                                                               {1, 2, 1, 0, 0},
                                                               {1, 3, 3, 1, 0},
                                                               {1, 4, 6, 4, 1}}};
  return table[n][k];
}

// Raw moments E[S^k], k = 1..4, of the standardized FKML variable. Entries
// past the existence boundary are NaN.
//
// With A = (p^a - 1)/a and B = ((1-p)^b - 1)/b, S = A - B and
// E[A^i B^j] = a^-i b^-j sum_r sum_s C(i,r) C(j,s) (-1)^(i-r+j-s) Beta(r a + 1, s b + 1).
// The double sum cancels badly when a shape is near zero, so those cases
// integrate the small-shape factor numerically instead.
class StandardMoments {
 public:
  StandardMoments(double a, double b) : a_(a), b_(b) {
    const bool a_ok = std::fabs(a) >= kClosedFormMin;
    const bool b_ok = std::fabs(b) >= kClosedFormMin;
    if (a_ok && b_ok) {
      for (int r = 0; r <= 4; ++r) {
        for (int s = 0; s <= 4; ++s) {
          const double x = r * a + 1.0;
          const double y = s * b + 1.0;
          beta_[r][s] = (x > 0.0 && y > 0.0) ? std::exp(log_beta(x, y)) : kInf;
        }
      }
      mode_ = Mode::Closed;
    } else if (!a_ok && b_ok) {
      mode_ = Mode::SmallLeft;
    } else if (a_ok && !b_ok) {
      mode_ = Mode::SmallRight;
    } else {
      mode_ = Mode::BothSmall;
    }
  }

  [[nodiscard]] std::array<double, 5> raw() const {
    std::array<double, 5> out{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 1; k <= 4; ++k) {
      if (!(std::min(a_, b_) > -1.0 / k)) {
        out[k] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double sum = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += binomial(k, j) * sign * cross(k - j, j);
      }
      out[k] = sum;
    }
    return out;
  }

 private:
  enum class Mode { Closed, SmallLeft, SmallRight, BothSmall };

  // E[A^i B^j].
  [[nodiscard]] double cross(int i, int j) const {
    switch (mode_) {
      case Mode::Closed: {
        double sum = 0.0;
        for (int r = 0; r <= i; ++r) {
          for (int s = 0; s <= j; ++s) {
            const double sign = ((i - r + j - s) % 2 == 0) ? 1.0 : -1.0;
            sum += sign * binomial(i, r) * binomial(j, s) * beta_[r][s];
          }
        }
        return sum / (std::pow(a_, i) * std::pow(b_, j));
      }
      case Mode::SmallLeft:
        return mixed(a_, b_, i, j);
      case Mode::SmallRight:
        // p -> 1-p swaps the roles of the two shapes.
        return mixed(b_, a_, j, i);
      case Mode::BothSmall: {
        const double a = a_;
        const double b = b_;
        auto f = [=](double p, double q) {
          const double lp = p < 0.5 ? std::log(p) : std::log1p(-q);
          const double lq = q < 0.5 ? std::log(q) : std::log1p(-p);
          return std::pow(shape_term(lp, a), i) * std::pow(shape_term(lq, b), j);
        };
        return integrate_unit_interval(f, 1e-13, 1e-15).value;
      }
    }
    return 0.0;
  }

  // E[A_small^i B^j] where B's shape is large enough for the binomial form:
  // b^-j sum_s C(j,s) (-1)^(j-s) int A^i (1-p)^(s b) dp.
  static double mixed(double small, double other, int i, int j) {
    double sum = 0.0;
    for (int s = 0; s <= j; ++s) {
      const double sign = ((j - s) % 2 == 0) ? 1.0 : -1.0;
      const double c = s * other;
      double term;
      if (i == 0) {
        term = 1.0 / (c + 1.0);
      } else {
        auto f = [=](double p, double q) {
          const double lp = p < 0.5 ? std::log(p) : std::log1p(-q);
          const double lq = q < 0.5 ? std::log(q) : std::log1p(-p);
          return std::pow(shape_term(lp, small), i) * std::exp(c * lq);
        };
        term = integrate_unit_interval(f, 1e-13, 1e-15).value;
      }
      sum += sign * binomial(j, s) * term;
    }
    return sum / std::pow(other, j);
  }

  double a_;
  double b_;
  Mode mode_;
  std::array<std::array<double, 5>, 5> beta_{};
};

struct ShapeStats {
  double mean;
  double variance;
  double skewness;
  double kurtosis;
};

ShapeStats shape_stats(double a, double b) {
  const auto m = StandardMoments(a, b).raw();
  const double m1 = m[1];
  const double var = m[2] - m1 * m1;
  const double mu3 = m[3] - 3.0 * m1 * m[2] + 2.0 * m1 * m1 * m1;
  const double mu4 = m[4] - 4.0 * m1 * m[3] + 6.0 * m1 * m1 * m[2] - 3.0 * m1 * m1 * m1 * m1;
  return {m1, var, mu3 / std::pow(var, 1.5), mu4 / (var * var)};
}

struct Candidate {
  double a;
  double b;
  double merit;
};

constexpr double kConverged = 1e-26;
constexpr int kStallWindow = 6;
constexpr double kStallRatio = 0.5;

// Damped Newton on (skewness, kurtosis) residuals from one starting point.
Candidate newton_shapes(double a, double b, double skew, double kurt) {
  constexpr double kMaxShape = 50.0;
  constexpr double kMinShape = kFeasibleShape + 1e-7;
  const double kurt_scale = std::max(1.0, kurt);

  auto residual = [&](double x, double y, double& r1, double& r2) {
    const auto st = shape_stats(x, y);
    r1 = st.skewness - skew;
    r2 = (st.kurtosis - kurt) / kurt_scale;
    return std::isfinite(r1) && std::isfinite(r2);
  };
  auto inside = [&](double x, double y) {
    return x > kMinShape && y > kMinShape && x < kMaxShape && y < kMaxShape;
  };

  double r1;
  double r2;
  if (!residual(a, b, r1, r2)) return {a, b, kInf};
  double merit = r1 * r1 + r2 * r2;
  std::array<double, kStallWindow> history{};
  history.fill(kInf);

  for (int iter = 0; iter < 100 && merit > kConverged; ++iter) {
    // Newton converges quadratically near a root; a slow crawl means this
    // start is heading for a boundary or a non-zero local minimum.
    if (merit > kStallRatio * history[iter % kStallWindow]) break;
    history[iter % kStallWindow] = merit;
    const double ha = 1e-6 * std::max(1.0, std::fabs(a));
    const double hb = 1e-6 * std::max(1.0, std::fabs(b));
    double ra1, ra2, rb1, rb2;
    // One-sided difference toward the interior when close to the boundary.
    const double da = (a - ha > kMinShape) ? -ha : ha;
    const double db = (b - hb > kMinShape) ? -hb : hb;
    if (!residual(a + da, b, ra1, ra2) || !residual(a, b + db, rb1, rb2)) break;
    const double j11 = (ra1 - r1) / da;
    const double j21 = (ra2 - r2) / da;
    const double j12 = (rb1 - r1) / db;
    const double j22 = (rb2 - r2) / db;
    const double det = j11 * j22 - j12 * j21;
    double step_a;
    double step_b;
    if (std::fabs(det) > 1e-300 && std::isfinite(det)) {
      step_a = -(j22 * r1 - j12 * r2) / det;
      step_b = -(-j21 * r1 + j11 * r2) / det;
    } else {
      // Singular Jacobian: fall back to a gradient step.
      step_a = -(j11 * r1 + j21 * r2);
      step_b = -(j12 * r1 + j22 * r2);
    }
    if (!std::isfinite(step_a) || !std::isfinite(step_b)) break;

    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      const double na = a + t * step_a;
      const double nb = b + t * step_b;
      if (!inside(na, nb)) continue;
      double n1;
      double n2;
      if (!residual(na, nb, n1, n2)) continue;
      const double nm = n1 * n1 + n2 * n2;
      if (nm < merit) {
        a = na;
        b = nb;
        r1 = n1;
        r2 = n2;
        merit = nm;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {a, b, merit};
}

// Skewness and kurtosis tabulated on a fixed shape grid, built once. Newton
// runs start from the grid points that are local minima of the residual.
class ShapeGrid {
 public:
  static const ShapeGrid& instance() {
    static const ShapeGrid grid;
    return grid;
  }

  [[nodiscard]] std::vector<Candidate> starts(double skew, double kurt, std::size_t limit) const {
    const std::size_t n = kNodes.size();
    const double kurt_scale = std::max(1.0, kurt);
    std::vector<double> merit(n * n, kInf);
    for (std::size_t k = 0; k < n * n; ++k) {
      if (!std::isfinite(skew_[k]) || !std::isfinite(kurt_[k])) continue;
      const double r1 = skew_[k] - skew;
      const double r2 = (kurt_[k] - kurt) / kurt_scale;
      merit[k] = r1 * r1 + r2 * r2;
    }
    auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
      const auto size = static_cast<std::ptrdiff_t>(n);
      if (i < 0 || j < 0 || i >= size || j >= size) return kInf;
      return merit[static_cast<std::size_t>(i * size + j)];
    };
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double m = merit[i * n + j];
        if (!std::isfinite(m)) continue;
        bool local_min = true;
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            if (at(static_cast<std::ptrdiff_t>(i) + di, static_cast<std::ptrdiff_t>(j) + dj) < m) {
              local_min = false;
            }
          }
        }
        if (local_min) out.push_back({kNodes[i], kNodes[j], m});
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return x.merit < y.merit; });
    if (out.size() > limit) out.resize(limit);
    return out;
  }

 private:
  static constexpr std::array<double, 34> kNodes{
      -0.24, -0.22, -0.2, -0.17, -0.14, -0.11, -0.08, -0.05, -0.025, 0.0, 0.025, 0.05,
      0.08,  0.11,  0.15, 0.2,   0.25,  0.3,   0.4,   0.5,   0.65,   0.8, 1.0,   1.25,
      1.5,   2.0,   2.5,  3.0,   4.0,   5.5,   8.0,   12.0,  20.0,   35.0};

  ShapeGrid() {
    const std::size_t n = kNodes.size();
    skew_.resize(n * n);
    kurt_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto st = shape_stats(kNodes[i], kNodes[j]);
        skew_[i * n + j] = st.skewness;
        kurt_[i * n + j] = st.kurtosis;
      }
    }
  }

  std::vector<double> skew_;
  std::vector<double> kurt_;
};

}  // namespace

void GldFkml::validate() const {
  if (!std::isfinite(location) || !std::isfinite(inverse_scale) || !std::isfinite(left_shape) ||
      !std::isfinite(right_shape)) {
    throw ParameterError("gld: parameters must be finite");
  }
  if (!(inverse_scale > 0.0)) throw ParameterError("gld: inverse scale must be positive");
}

double GldFkml::lower_support() const {
  return left_shape > 0.0 ? location - 1.0 / (inverse_scale * left_shape) : -kInf;
}

double GldFkml::upper_support() const {
  return right_shape > 0.0 ? location + 1.0 / (inverse_scale * right_shape) : kInf;
}

double gld_quantile(const GldFkml& params, double p) {
  params.validate();
  require_probability(p);
  return params.location +
         standard_quantile(p, 1.0 - p, params.left_shape, params.right_shape) /
             params.inverse_scale;
}

double gld_quantile_density(const GldFkml& params, double p) {
  params.validate();
  require_probability(p);
  const double q = 1.0 - p;
  return (std::exp((params.left_shape - 1.0) * std::log(p)) +
          std::exp((params.right_shape - 1.0) * std::log(q))) /
         params.inverse_scale;
}

double gld_cdf(const GldFkml& params, double x) {
  params.validate();
  if (std::isnan(x)) throw DomainError("gld_cdf: NaN argument");
  const double lo = kCdfEdge;
  const double hi = 1.0 - kCdfEdge;
  if (x <= gld_quantile(params, lo)) return x < gld_quantile(params, lo) ? 0.0 : lo;
  if (x >= gld_quantile(params, hi)) return x > gld_quantile(params, hi) ? 1.0 : hi;
  RootOptions opt;
  opt.abs_tol = 1e-15;
  return find_root([&](double u) { return gld_quantile(params, u) - x; }, lo, hi, opt);
}

double gld_density_at(const GldFkml& params, double x) {
  params.validate();
  const double q_lo = gld_quantile(params, kCdfEdge);
  const double q_hi = gld_quantile(params, 1.0 - kCdfEdge);
  if (!(x >= q_lo && x <= q_hi)) {
    std::ostringstream msg;
    msg << "gld_density_at: x = " << x << " outside [" << q_lo << ", " << q_hi << "]";
    throw DomainError(msg.str());
  }
  return 1.0 / gld_quantile_density(params, gld_cdf(params, x));
}

MomentSet gld_moments(const GldFkml& params) {
  params.validate();
  const double a = params.left_shape;
  const double b = params.right_shape;
  const auto m = StandardMoments(a, b).raw();
  const double lam = params.inverse_scale;
  const double lowest = std::min(a, b);

  MomentSet out;
  if (!(lowest > -1.0)) return out;
  const double m1 = m[1];
  out.mean = params.location + m1 / lam;
  if (!(lowest > -0.5)) return out;
  out.variance = (m[2] - m1 * m1) / (lam * lam);
  if (!(lowest > -1.0 / 3.0)) return out;
  out.mu3 = (m[3] - 3.0 * m1 * m[2] + 2.0 * m1 * m1 * m1) / std::pow(lam, 3);
  if (!(lowest > kFeasibleShape)) return out;
  out.mu4 = (m[4] - 4.0 * m1 * m[3] + 6.0 * m1 * m1 * m[2] - 3.0 * m1 * m1 * m1 * m1) /
            std::pow(lam, 4);
  return out;
}

GldFkml fit_moments(const MomentSet& moments) {
  if (!moments.has_four()) throw FitFailure("fit_moments: first four moments required");
  if (!(*moments.variance > 0.0)) throw FitFailure("fit_moments: variance must be positive");
  const double skew = moments.skewness();
  const double kurt = moments.kurtosis();
  if (!std::isfinite(skew) || !std::isfinite(kurt)) {
    throw FitFailure("fit_moments: skewness/kurtosis not finite");
  }

  constexpr double kAccept = 1e-20;  // squared residual, ~1e-10 on each statistic
  constexpr std::size_t kMaxStarts = 8;

  std::vector<Candidate> solutions;
  for (const auto& start : ShapeGrid::instance().starts(skew, kurt, kMaxStarts)) {
    const auto c = newton_shapes(start.a, start.b, skew, kurt);
    if (c.merit <= kAccept) solutions.push_back(c);
  }
  if (solutions.empty()) {
    std::ostringstream msg;
    msg << "fit_moments: no FKML shapes > -1/4 reproduce skewness " << skew << " and kurtosis "
        << kurt;
    throw FitFailure(msg.str());
  }
  // Several shape pairs can share the same skewness and kurtosis; take the
  // one closest to the origin (the heavier-tailed branch).
  const auto best = std::min_element(
      solutions.begin(), solutions.end(), [](const Candidate& x, const Candidate& y) {
        const double nx = std::fabs(x.a) + std::fabs(x.b);
        const double ny = std::fabs(y.a) + std::fabs(y.b);
        if (std::fabs(nx - ny) > 1e-6) return nx < ny;
        return x.merit < y.merit;
      });

  const auto st = shape_stats(best->a, best->b);
  GldFkml out;
  out.left_shape = best->a;
  out.right_shape = best->b;
  out.inverse_scale = std::sqrt(st.variance / *moments.variance);
  out.location = *moments.mean - st.mean / out.inverse_scale;
  return out;
}

GldFkml fit_moments(const Sample& sample) {
  MomentSet m;
  m.mean = sample.mean();
  m.variance = sample.central_moment(2);
  m.mu3 = sample.central_moment(3);
  m.mu4 = sample.central_moment(4);
  return fit_moments(m);
}

}  // namespace rcv
