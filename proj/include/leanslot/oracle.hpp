#pragma once

#include <vector>

#include "leanslot/models.hpp"

namespace leanslot {

/// Best allocation found by enumerating two-level structures: n_max slots at
/// p_max plus n_uniform slots sharing the residual rate evenly.
struct OracleResult {
  double best_p_cons;
  int n_max_slots;
  int n_uniform_slots;
  double uniform_power;
  bool exhaustive;  ///< true: every (n_max, n_uniform) pair was evaluated
};

/// Structured exhaustive search over all cap-block/uniform-block splits.
/// Constant sleep only. Infeasible rates throw InfeasibleRate.
[[nodiscard]] OracleResult oracle_structured(const ActiveModel& am, const SleepModel& sm,
                                             const LinkParams& lp);

/// Free-power grid scan for tiny frames (n_slots <= 3): all but one power walk
/// a uniform grid over [0, p_max], the last is solved from the rate constraint.
struct GridScan {
  double p_cons;             ///< best frame-average consumption on the grid
  double step;               ///< grid spacing in watts
  int n_active;
  std::vector<double> powers;
};

[[nodiscard]] GridScan oracle_grid(const ActiveModel& am, const SleepModel& sm,
                                   const LinkParams& lp, int points_per_axis);

}  // namespace leanslot
