#include "leanslot/scalaropt.hpp"

#include <cmath>
#include <numbers>

namespace leanslot {

namespace {

constexpr double kInvE = 0.36787944117144233;

// Series around the branch point z = -1/e in p = sqrt(2(e z + 1)).
double branch_point_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
}

}  // namespace

double lambert_w0(double z) {
  if (std::isnan(z) || z < -kInvE * (1.0 + 1e-12) - 1e-300)
    throw std::domain_error("lambert_w0: argument below -1/e");
  if (z == 0.0) return 0.0;

  double w;
  if (z < -0.32) {
    double p2 = 2.0 * (std::numbers::e * z + 1.0);
    double p = std::sqrt(p2 < 0.0 ? 0.0 : p2);
    w = branch_point_series(p);
    if (p < 1e-3) return w;  // within 1e-12 of the root; Halley would divide by ~0
  } else if (z < 3.0) {
    w = z / (1.0 + z);
  } else {
    double l1 = std::log(z);
    double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < 100; ++i) {
    double ew = std::exp(w);
    double f = w * ew - z;
    if (std::abs(f) <= 1e-13 * std::max(1.0, std::abs(z))) break;
    double wp1 = w + 1.0;
    double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

namespace {

// log((2^x - 1)^alpha) evaluated without overflowing for x up to ~1000/alpha.
double log_pow_term(double alpha, double x) {
  double u = x * std::numbers::ln2;
  double log_expm1 = u > 36.0 ? u + std::log1p(-std::exp(-u)) : std::log(std::expm1(u));
  return alpha * log_expm1;
}

// Sign carrier of d/dx [(delta + (2^x - 1)^alpha) / x]: the numerator
// alpha ln2 / (1 - 2^-x) * g(x) * x - delta - g(x) with g = (2^x - 1)^alpha.
double ra_derivative_numerator(const RaProblem& prob, double x) {
  double u = x * std::numbers::ln2;
  double g = std::exp(log_pow_term(prob.alpha, x));
  return prob.alpha * std::numbers::ln2 / (-std::expm1(-u)) * g * x - prob.delta - g;
}

void check_problem(const RaProblem& prob) {
  if (!(prob.alpha > 0.0) || prob.alpha > 1.0)
    throw std::invalid_argument("r_a: alpha must lie in (0, 1]");
  if (!std::isfinite(prob.delta) || prob.delta < 0.0)
    throw std::invalid_argument("r_a: delta must be finite and >= 0");
}

}  // namespace

double ra_objective(const RaProblem& prob, double x) {
  return (prob.delta + std::exp(log_pow_term(prob.alpha, x))) / x;
}

double r_a_numeric(const RaProblem& prob, double r_hint) {
  check_problem(prob);
  double hi = std::max(200.0 / prob.alpha, 4.0 * r_hint);
  double lo = 1e-9;
  ScalarMin coarse =
      minimize_convex([&](double x) { return ra_objective(prob, x); }, lo, hi, 1e-6);

  // Polish by bisecting the derivative's sign change around the coarse argmin.
  double a = std::max(lo, coarse.arg - 2e-6 * std::max(1.0, coarse.arg));
  double b = std::min(hi, coarse.arg + 2e-6 * std::max(1.0, coarse.arg));
  double fa = ra_derivative_numerator(prob, a);
  double fb = ra_derivative_numerator(prob, b);
  for (int i = 0; i < 60 && fa > 0.0 && a > lo; ++i) {  // minimum is further left
    a = std::max(lo, a - (b - a));
    fa = ra_derivative_numerator(prob, a);
  }
  for (int i = 0; i < 60 && fb < 0.0 && b < hi; ++i) {  // minimum is further right
    b = std::min(hi, b + (b - a));
    fb = ra_derivative_numerator(prob, b);
  }
  if (!(fa <= 0.0 && fb >= 0.0)) return coarse.arg;  // boundary infimum (alpha = 1, delta = 0)
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if (ra_derivative_numerator(prob, mid) < 0.0)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

double r_a(const RaProblem& prob, double r_hint) {
  check_problem(prob);
  if (prob.delta == 0.0) {
    double inv = 1.0 / prob.alpha;
    return (lambert_w0(-inv * std::exp(-inv)) + inv) / std::numbers::ln2;
  }
  return r_a_numeric(prob, r_hint);
}

}  // namespace leanslot
