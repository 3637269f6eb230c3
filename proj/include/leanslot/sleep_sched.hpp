#pragma once

#include <vector>

#include "leanslot/alloc.hpp"
#include "leanslot/models.hpp"

namespace leanslot {

/// One sleep mode evaluated as the frame's sleep depth.
struct ModeCandidate {
  int mode_index;   ///< index into SleepModel::modes
  int n_a_cap;      ///< N - floor(T_s / T): active slots left after the wake lead time
  double r_a_s;     ///< per-slot rate minimizer for this mode's sleep power
  double r_tilde_s; ///< min(r_a_s, r_max)
  int n_a;          ///< chosen active-slot count
  double p_cons;    ///< frame average under the true piecewise sleep schedule
  double p_cons_accounting;  ///< frame average when the idle time is billed as
                             ///< one transition into mode s and then flat P_s
};

struct SuccessiveResult {
  Allocation alloc;
  int mode_index;
  double p_cons;
  double p_cons_asymptotic;              ///< best continuous-share relaxation over modes
  std::vector<ModeCandidate> candidates; ///< every feasible mode, ascending index
};

/// Indices of the sleep modes that can still carry the frame's rate budget:
/// N R / r_max <= N - floor(T_s / T). Ascending order.
[[nodiscard]] std::vector<int> feasible_modes(const SleepModel& sm, const LinkParams& lp,
                                              double r_max);

/// Pick the sleep mode and active-slot count minimizing frame-average
/// consumption when idle slots drop into a single mode whose entry lead time
/// eats into the frame.
[[nodiscard]] SuccessiveResult allocate_successive(const ActiveModel& am, const SleepModel& sm,
                                                   const LinkParams& lp);

}  // namespace leanslot
