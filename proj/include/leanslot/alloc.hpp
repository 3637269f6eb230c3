#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>

#include "leanslot/models.hpp"

namespace leanslot {

/// Largest feasible average rate: log2(1 + p_max / sigma2).
[[nodiscard]] double r_max(double p_max, double sigma2);

/// Pick the bounding integer of x with the smaller cost (ties: the smaller
/// integer). cost may return +inf for infeasible candidates; both infeasible
/// is an error. Candidates are clamped at 0 from below.
template <std::invocable<long> C>
[[nodiscard]] long ceil_floor(double x, C&& cost) {
  long lo = static_cast<long>(std::floor(x));
  long hi = static_cast<long>(std::ceil(x));
  if (lo < 0) lo = 0;
  if (hi < 0) hi = 0;
  double clo = cost(lo);
  if (hi == lo) {
    if (!std::isfinite(clo)) throw std::domain_error("ceil_floor: no feasible candidate");
    return lo;
  }
  double chi = cost(hi);
  if (!std::isfinite(clo) && !std::isfinite(chi))
    throw std::domain_error("ceil_floor: no feasible candidate");
  return clo <= chi ? lo : hi;
}

enum class Regime { Linear, Exponential };

/// Scaling-regime constants and classification for the large-N solution.
struct RegimeReport {
  Regime regime;
  double r_tilde;  ///< min(r_a, r_max)
  double p_tilde;  ///< min(p_a, p_max)
  double r_max;
  double r_a;
  double p_a;             ///< (2^r_a - 1) sigma2
  double asymptotic_gap;  ///< evaluated allocation consumption minus the formula
};

struct ExactResult {
  Allocation alloc;
  double p_cons;
  int clamped_slots;  ///< slots pinned at p_max by the iterative solver
};

struct AsymptoticResult {
  Allocation alloc;
  RegimeReport report;
  double p_cons;  ///< closed-form consumption (the allocation's own evaluation
                  ///< differs by the reported asymptotic_gap)
};

struct UniformResult {
  Allocation alloc;
  double p_cons;
};

struct RushResult {
  Allocation alloc;
  double p_cons;             ///< evaluation of the finite allocation
  double p_cons_asymptotic;  ///< p_sleep + (R/r_max)(p0 - p_sleep + gamma p_max^alpha)
};

/// Cap-free finite-N optimum: N_a = ceil_floor(min(N R / R_a, N)) under the
/// average-consumption cost, uniform power on active slots. Constant sleep only.
[[nodiscard]] Allocation allocate_no_pmax(const ActiveModel& am, const SleepModel& sm,
                                          const LinkParams& lp);

/// Iterative finite-N solver with the per-slot power cap: start from the
/// cap-free solution; while its uniform power exceeds p_max, pin one more slot
/// at p_max, fold that slot's rate out of the target, and re-solve the rest.
/// The result carries the original target rate exactly.
[[nodiscard]] ExactResult allocate_exact(const ActiveModel& am, const SleepModel& sm,
                                         const LinkParams& lp);

/// Large-N closed form. Linear regime (R <= min(r_a, r_max)): round(N R / r_tilde)
/// slots at p_tilde. Exponential regime: the whole frame at (2^R - 1) sigma2.
[[nodiscard]] AsymptoticResult allocate_asymptotic(const ActiveModel& am,
                                                   const SleepModel& sm,
                                                   const LinkParams& lp);

/// Benchmark: every slot active at (2^R - 1) sigma2.
[[nodiscard]] UniformResult allocate_uniform(const ActiveModel& am, const SleepModel& sm,
                                             const LinkParams& lp);

/// Benchmark: ceil(N R / r_max) - 1 slots at p_max, one residual slot, sleep after.
[[nodiscard]] RushResult allocate_rush_to_sleep(const ActiveModel& am, const SleepModel& sm,
                                                const LinkParams& lp);

}  // namespace leanslot
