#pragma once

#include <functional>
#include <span>

namespace rcv {

using ScalarFunction = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
  /// Length scale for the t/(1-t) map used on semi-infinite ranges.
  double tail_scale = 1.0;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
/// Either endpoint may be infinite; semi-infinite ranges are mapped onto a
/// finite interval. Never evaluates f at the endpoints.
[[nodiscard]] QuadratureResult integrate(const ScalarFunction& f, double a, double b,
                                         const QuadratureOptions& options = {});

/// Integrates over consecutive pieces [points[i], points[i+1]] so that known
/// discontinuities or kinks of f sit on piece boundaries. The first and last
/// point may be infinite. Duplicate points are skipped.
[[nodiscard]] QuadratureResult integrate_piecewise(const ScalarFunction& f,
                                                   std::span<const double> points,
                                                   const QuadratureOptions& options = {});

/// Integrand on (0,1) that receives both u and its complement 1-u, each
/// computed without cancellation.
using UnitIntervalFunction = std::function<double(double u, double one_minus_u)>;

/// Double-exponential (tanh-sinh) quadrature over (0,1). Robust to
/// integrable algebraic or logarithmic endpoint singularities. Stops once the
/// change between levels is below rel_tol * |estimate| or abs_tol.
[[nodiscard]] QuadratureResult integrate_unit_interval(const UnitIntervalFunction& f,
                                                       double rel_tol = 1e-12,
                                                       double abs_tol = 0.0);

struct RootOptions {
  double abs_tol = 1e-12;
  int max_iterations = 300;
};

/// Brent's bracketing root finder (bisection / secant / inverse quadratic).
/// Throws NumericalError if f(lo) and f(hi) share a sign.
[[nodiscard]] double find_root(const ScalarFunction& f, double lo, double hi,
                               const RootOptions& options = {});

}  // namespace rcv
