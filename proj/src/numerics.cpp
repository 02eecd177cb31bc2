#include "rcv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "rcv/errors.hpp"
#include "rcv/special_functions.hpp"

namespace rcv {

namespace {

// Kronrod abscissae (descending), Kronrod weights, and the weights of the
// embedded 7-point Gauss rule at the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const ScalarFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

QuadratureResult adaptive_finite(const ScalarFunction& f, double a, double b,
                                 const QuadratureOptions& opt) {
  if (a == b) return {0.0, 0.0, 0, true};
  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  int count = 1;
  while (count < opt.max_intervals) {
    if (error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(value))) break;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    heap.pop();
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed accumulated rounding from the incremental updates.
  value = 0.0;
  error = 0.0;
  auto items = std::move(heap);
  while (!items.empty()) {
    value += items.top().value;
    error += items.top().error;
    items.pop();
  }
  const bool ok =
      std::isfinite(value) && error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(value));
  return {value, error, count, ok};
}

}  // namespace

QuadratureResult integrate(const ScalarFunction& f, double a, double b,
                           const QuadratureOptions& options) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
  if (a > b) {
    auto r = integrate(f, b, a, options);
    r.value = -r.value;
    return r;
  }
  const double s = options.tail_scale;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return adaptive_finite(f, a, b, options);
  if (!lo_inf) {
    auto g = [&](double t) {
      const double om = 1.0 - t;
      return f(a + s * t / om) * s / (om * om);
    };
    return adaptive_finite(g, 0.0, 1.0, options);
  }
  if (!hi_inf) {
    auto g = [&](double t) { return f(b - s * (1.0 - t) / t) * s / (t * t); };
    return adaptive_finite(g, 0.0, 1.0, options);
  }
  auto g = [&](double t) {
    const double om = 1.0 - t * t;
    return f(s * t / om) * s * (1.0 + t * t) / (om * om);
  };
  return adaptive_finite(g, -1.0, 1.0, options);
}

QuadratureResult integrate_piecewise(const ScalarFunction& f, std::span<const double> points,
                                     const QuadratureOptions& options) {
  if (points.size() < 2) throw DomainError("integrate_piecewise: need at least two points");
  std::vector<double> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  QuadratureResult total{0.0, 0.0, 0, true};
  if (pts.size() < 2) return total;
  QuadratureOptions piece = options;
  piece.abs_tol = options.abs_tol / static_cast<double>(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto r = integrate(f, pts[i], pts[i + 1], piece);
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.intervals += r.intervals;
    total.converged = total.converged && r.converged;
  }
  return total;
}

QuadratureResult integrate_unit_interval(const UnitIntervalFunction& f, double rel_tol,
                                         double abs_tol) {
  constexpr double kMaxT = 6.0;
  constexpr int kMaxLevel = 11;

  auto term = [&](double t) {
    const double u = kPi * std::sinh(t);
    const double p = 1.0 / (1.0 + std::exp(-u));
    const double q = 1.0 / (1.0 + std::exp(u));
    if (p <= 0.0 || q <= 0.0) return 0.0;
    const double w = kPi * std::cosh(t) * p * q;
    if (w == 0.0) return 0.0;
    return w * f(p, q);
  };

  // Level 0: all integer nodes in [-kMaxT, kMaxT] with step 1.
  double h = 1.0;
  double sum = term(0.0);
  for (int k = 1; k <= static_cast<int>(kMaxT); ++k) sum += term(k) + term(-k);
  double estimate = h * sum;
  int evaluations = 1 + 2 * static_cast<int>(kMaxT);

  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (double t = h; t <= kMaxT; t += 2.0 * h) {
      added += term(t) + term(-t);
      evaluations += 2;
    }
    sum += added;
    const double next = h * sum;
    const double change = std::fabs(next - estimate);
    estimate = next;
    if (level >= 3 && change <= std::max(rel_tol * std::fabs(estimate), abs_tol)) {
      return {estimate, change, evaluations, std::isfinite(estimate)};
    }
    if (level >= 3 && change == 0.0) return {estimate, 0.0, evaluations, true};
  }
  return {estimate, std::fabs(estimate) * rel_tol, evaluations, false};
}

double find_root(const ScalarFunction& f, double lo, double hi, const RootOptions& options) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "find_root: root not bracketed on [" << lo << ", " << hi << "] (f = " << fa << ", "
        << fb << ")";
    throw NumericalError(msg.str());
  }
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::fabs(b) + 0.5 * options.abs_tol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;

    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = e = m;
    } else {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = e = m;
      }
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw NumericalError("find_root: objective returned NaN");
  }
  throw NumericalError("find_root: iteration limit reached");
}

}  // namespace rcv
