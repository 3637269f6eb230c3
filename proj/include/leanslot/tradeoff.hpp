#pragma once

#include <vector>

#include "leanslot/models.hpp"
#include "leanslot/sleep_sched.hpp"

namespace leanslot {

/// One point on the energy-efficiency / spectral-efficiency curve.
struct EePoint {
  double se;         ///< bit/s/Hz, R / (1 + rolloff)
  double ee;         ///< bit/J
  double bandwidth;  ///< Hz, (1 + rolloff) / T
  double rolloff;
};

/// Efficiency pair delivered at spectral efficiency se by the large-N
/// single-mode solution. Constant sleep only. Infeasible se throws.
[[nodiscard]] EePoint ee_for_se(const ActiveModel& am, const SleepModel& sm, double sigma2,
                                double se, double symbol_duration, double rolloff);

/// Global energy-efficiency maximizer over the feasible se range. When the
/// per-slot minimizer rate clears r_max the optimum sits at se_max; otherwise
/// it is interior to the exponential regime and found by scalar minimization.
[[nodiscard]] EePoint max_ee(const ActiveModel& am, const SleepModel& sm, double sigma2,
                             double symbol_duration, double rolloff);

/// EE-SE curve when idle slots use the best multi-mode sleep schedule at each
/// rate, over an n_slots frame. Output pairs 1:1 with se_values; se <= 0 maps
/// to ee = 0 and an se beyond the power cap maps to ee = NaN.
[[nodiscard]] std::vector<EePoint> ee_se_sweep_successive(
    const ActiveModel& am, const SleepModel& sm, int n_slots, double sigma2,
    double symbol_duration, double rolloff, const std::vector<double>& se_values);

}  // namespace leanslot
