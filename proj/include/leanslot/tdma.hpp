#pragma once

#include <stdexcept>
#include <vector>

#include "leanslot/alloc.hpp"
#include "leanslot/models.hpp"

namespace leanslot {

/// One downlink user: its noise level and its per-frame average rate demand.
struct TdmaUser {
  double sigma2_k;
  double rate_k;

  [[nodiscard]] bool operator==(const TdmaUser&) const = default;
};

/// Per-user scaling constants, all derived from the shared active model.
struct TdmaUserDerived {
  double r_k_max;  ///< log2(1 + p_max / sigma2_k)
  double r_k_a;    ///< per-slot rate minimizer at this user's noise level
  double r_hat_k;  ///< min(r_k_a, r_k_max)
  double p_hat_k;  ///< min((2^r_k_a - 1) sigma2_k, p_max)
};

/// Thrown when the aggregate demand leaves no idle slots, so the linear
/// decomposition does not apply. Carries the load fraction sum_k R_k / r_hat_k
/// and the consumption of the always-on benchmark (NaN when even that cannot
/// carry the demand).
class BindingRegime : public std::domain_error {
 public:
  BindingRegime(double load_fraction, double uniform_benchmark_w);
  [[nodiscard]] double load_fraction() const { return load_fraction_; }
  [[nodiscard]] double uniform_benchmark_w() const { return uniform_benchmark_w_; }

 private:
  double load_fraction_;
  double uniform_benchmark_w_;
};

struct TdmaResult {
  std::vector<int> n_k;                   ///< active slots granted to each user
  std::vector<TdmaUserDerived> derived;
  Allocation alloc;                       ///< users packed contiguously, ascending index
  double p_cons;                          ///< linear closed form
  double p_cons_finite;                   ///< evaluation of the packed allocation
};

/// Whether every user fits even at full power: sum_k ceil(N R_k / r_k_max) <= N.
[[nodiscard]] bool tdma_feasible(const ActiveModel& am, const std::vector<TdmaUser>& users,
                                 int n_slots);

/// Slot shares and powers for a shared frame in the linear regime: user k gets
/// round(N R_k / r_hat_k) slots at p_hat_k (clamped so its own rate stays
/// reachable), consumption p_sleep + sum_k R_k (p0 - p_sleep + gamma
/// p_hat_k^alpha) / r_hat_k. Throws BindingRegime when the shares overflow the
/// frame.
[[nodiscard]] TdmaResult tdma_allocate_linear(const ActiveModel& am, const SleepModel& sm,
                                              const std::vector<TdmaUser>& users, int n_slots,
                                              double symbol_duration);

/// Always-on benchmark: the frame never sleeps, user k holds a time share
/// proportional to its rate and transmits at (2^{sum_j R_j}) - 1) sigma2_k.
/// Returns frame-average watts, NaN if any user's power lands above the cap.
[[nodiscard]] double tdma_uniform_benchmark(const ActiveModel& am,
                                            const std::vector<TdmaUser>& users);

}  // namespace leanslot
