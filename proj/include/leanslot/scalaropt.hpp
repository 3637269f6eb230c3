#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <utility>

namespace leanslot {

/// Principal branch W0 of the Lambert W function, z >= -1/e.
/// Halley iteration seeded by a branch-point series; residual |W e^W - z| <= 1e-12.
[[nodiscard]] double lambert_w0(double z);

struct ScalarMin {
  double arg;
  double value;
};

/// Golden-section minimizer for a convex (unimodal) f on [lo, hi].
/// Ties and flat stretches resolve toward the smaller argument.
template <std::invocable<double> F>
[[nodiscard]] ScalarMin minimize_convex(F&& f, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0)) throw std::invalid_argument("minimize_convex: bad bracket");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  if (!std::isfinite(fc) || !std::isfinite(fd))
    throw std::invalid_argument("minimize_convex: non-finite objective");
  while (b - a > tol) {
    if (fc <= fd) {  // keep the left interval on ties
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    if (!std::isfinite(fc) || !std::isfinite(fd))
      throw std::invalid_argument("minimize_convex: non-finite objective");
  }
  double x = fc <= fd ? c : d;
  double fx = fc <= fd ? fc : fd;
  return {x, fx};
}

/// Parameters of the per-slot-rate minimization: f(x) = (delta + (2^x - 1)^alpha) / x.
/// delta = (p0 - p_ref) / (gamma sigma^(2 alpha)) and is >= 0 whenever the active
/// load-independent power dominates the reference sleep power.
struct RaProblem {
  double delta;
  double alpha;
};

/// Value of f at x (see RaProblem).
[[nodiscard]] double ra_objective(const RaProblem& prob, double x);

/// The rate constant minimizing f over x > 0. Closed form via Lambert W when
/// delta == 0; numeric minimization over (0, max(200/alpha, 4*r_hint)] otherwise.
[[nodiscard]] double r_a(const RaProblem& prob, double r_hint = 0.0);

/// Numeric path regardless of delta (cross-check against the closed form).
[[nodiscard]] double r_a_numeric(const RaProblem& prob, double r_hint = 0.0);

/// Sentinel for the load-independent case gamma == 0: consumption no longer
/// depends on the per-slot powers, so concentrate everything in one slot.
[[nodiscard]] inline double r_a_infinite_case() {
  return std::numeric_limits<double>::infinity();
}

}  // namespace leanslot
