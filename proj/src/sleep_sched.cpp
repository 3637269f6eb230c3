#include "leanslot/sleep_sched.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leanslot/scalaropt.hpp"

namespace leanslot {

namespace {

double power_for_rate(double x, double sigma2) {
  return sigma2 * std::expm1(x * std::numbers::ln2);
}

double slot_rate_constant(const ActiveModel& am, double p_sleep, double sigma2) {
  if (am.gamma == 0.0) return r_a_infinite_case();
  double delta = (am.p0 - p_sleep) / (am.gamma * std::pow(sigma2, am.alpha));
  return r_a({delta, am.alpha});
}

int active_cap(const SleepModel::Mode& mode, const LinkParams& lp) {
  // floor with a small forgiveness so T_s being an exact multiple of T is not
  // spoiled by the division's roundoff
  return lp.n_slots - static_cast<int>(std::floor(mode.t_start / lp.symbol_duration + 1e-9));
}

}  // namespace

std::vector<int> feasible_modes(const SleepModel& sm, const LinkParams& lp, double r_max) {
  sm.validate();
  std::vector<int> out;
  double min_active = lp.rate * lp.n_slots / r_max;
  for (size_t s = 0; s < sm.modes.size(); ++s) {
    int cap = active_cap(sm.modes[s], lp);
    if (min_active <= cap + 1e-9) out.push_back(static_cast<int>(s));
  }
  return out;
}

SuccessiveResult allocate_successive(const ActiveModel& am, const SleepModel& sm,
                                     const LinkParams& lp) {
  sm.validate();
  if (lp.n_slots < 1) throw std::invalid_argument("allocate_successive: n_slots must be >= 1");
  double rmax = r_max(am.p_max, lp.sigma2);
  if (lp.rate > rmax * (1.0 + 1e-12)) throw InfeasibleRate(lp.rate, rmax);

  double n = lp.n_slots;
  double nt = n * lp.symbol_duration;
  std::vector<int> feasible = feasible_modes(sm, lp, rmax);

  SuccessiveResult res;
  res.mode_index = -1;
  res.p_cons = std::numeric_limits<double>::infinity();
  double best_accounting = std::numeric_limits<double>::infinity();
  res.p_cons_asymptotic = std::numeric_limits<double>::infinity();

  for (int s : feasible) {
    const SleepModel::Mode& mode = sm.modes[s];
    ModeCandidate cand{};
    cand.mode_index = s;
    cand.n_a_cap = active_cap(mode, lp);
    cand.r_a_s = slot_rate_constant(am, mode.power, lp.sigma2);
    cand.r_tilde_s = std::min(cand.r_a_s, rmax);

    long n_a = std::lround(std::min(lp.rate * n / cand.r_tilde_s,
                                    static_cast<double>(cand.n_a_cap)));
    if (lp.rate > 0.0 && n_a == 0) n_a = 1;
    // The rounded count must still honor the cap after meeting R exactly.
    while (n_a < cand.n_a_cap &&
           power_for_rate(lp.rate * n / static_cast<double>(n_a), lp.sigma2) >
               am.p_max * (1.0 + 1e-12))
      ++n_a;
    cand.n_a = static_cast<int>(n_a);

    Allocation a;
    a.n_active = cand.n_a;
    a.powers.assign(lp.n_slots, 0.0);
    if (cand.n_a > 0) {
      double p = power_for_rate(lp.rate * n / cand.n_a, lp.sigma2);
      for (int i = 0; i < cand.n_a; ++i) a.powers[i] = p;
    }

    cand.p_cons = p_cons(am, sm, lp, a);
    double t_sleep = (n - cand.n_a) * lp.symbol_duration;
    double e_transition = sleep_energy(sm, mode.t_start) - mode.t_start * mode.power;
    double e_accounted = e_transition + t_sleep * mode.power;
    double load = cand.n_a > 0 ? std::pow(a.powers[0], am.alpha) * cand.n_a : 0.0;
    cand.p_cons_accounting = cand.n_a / n * am.p0 + am.gamma / n * load + e_accounted / nt;
    res.candidates.push_back(cand);

    bool better = cand.p_cons < res.p_cons ||
                  (cand.p_cons == res.p_cons && cand.p_cons_accounting < best_accounting);
    if (better) {
      res.p_cons = cand.p_cons;
      best_accounting = cand.p_cons_accounting;
      res.mode_index = s;
      res.alloc = a;
    }

    // Continuous relaxation of this mode: active share capped by the lead time.
    double x = std::min(lp.rate / cand.r_tilde_s, 1.0 - mode.t_start / nt);
    if (lp.rate == 0.0) x = 0.0;
    double asym;
    if (x > 0.0) {
      double p = power_for_rate(lp.rate / x, lp.sigma2);
      asym = e_transition / nt + (1.0 - x) * mode.power +
             x * (am.p0 + am.gamma * std::pow(p, am.alpha));
    } else {
      asym = e_transition / nt + mode.power;
    }
    res.p_cons_asymptotic = std::min(res.p_cons_asymptotic, asym);
  }

  if (res.mode_index < 0) throw InfeasibleRate(lp.rate, rmax);
  return res;
}

}  // namespace leanslot
