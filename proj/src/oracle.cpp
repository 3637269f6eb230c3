#include "leanslot/oracle.hpp"

#include <cmath>
#include <numbers>

#include "leanslot/alloc.hpp"

namespace leanslot {

namespace {

double power_for_rate(double x, double sigma2) {
  return sigma2 * std::expm1(x * std::numbers::ln2);
}

double slot_rate(double p, double sigma2) { return std::log2(1.0 + p / sigma2); }

void check_constant_sleep(const SleepModel& sm, const char* who) {
  sm.validate();
  if (!sm.single_mode())
    throw std::invalid_argument(std::string(who) + ": needs a constant sleep power");
}

}  // namespace

OracleResult oracle_structured(const ActiveModel& am, const SleepModel& sm,
                               const LinkParams& lp) {
  check_constant_sleep(sm, "oracle_structured");
  if (lp.n_slots < 1 || lp.n_slots > 4096)
    throw std::invalid_argument("oracle_structured: n_slots must be in [1, 4096]");
  double rmax = r_max(am.p_max, lp.sigma2);
  if (lp.rate > rmax * (1.0 + 1e-12)) throw InfeasibleRate(lp.rate, rmax);

  int n = lp.n_slots;
  double p_sleep = sm.initial_power();
  double frame_bits = lp.rate * n;
  double cap_load = std::pow(am.p_max, am.alpha);

  OracleResult best{std::numeric_limits<double>::infinity(), 0, 0, 0.0, true};
  for (int n_max = 0; n_max <= n; ++n_max) {
    double residual = frame_bits - n_max * rmax;
    for (int n_u = 0; n_max + n_u <= n; ++n_u) {
      double p_u = 0.0;
      if (n_u == 0) {
        if (residual > 1e-9 * std::max(1.0, frame_bits)) continue;  // rate not met
      } else {
        if (residual < 0.0) continue;  // the cap block alone already overshoots
        p_u = power_for_rate(residual / n_u, lp.sigma2);
        if (p_u > am.p_max * (1.0 + 1e-12)) continue;
      }
      int n_a = n_max + (p_u > 0.0 ? n_u : 0);
      double load = n_max * cap_load + (p_u > 0.0 ? n_u * std::pow(p_u, am.alpha) : 0.0);
      double value =
          static_cast<double>(n_a) / n * am.p0 + am.gamma / n * load +
          static_cast<double>(n - n_a) / n * p_sleep;
      if (value < best.best_p_cons) {
        best.best_p_cons = value;
        best.n_max_slots = n_max;
        best.n_uniform_slots = p_u > 0.0 ? n_u : 0;
        best.uniform_power = p_u;
      }
    }
  }
  return best;
}

GridScan oracle_grid(const ActiveModel& am, const SleepModel& sm, const LinkParams& lp,
                     int points_per_axis) {
  check_constant_sleep(sm, "oracle_grid");
  if (lp.n_slots < 1 || lp.n_slots > 3)
    throw std::invalid_argument("oracle_grid: n_slots must be in [1, 3]");
  if (points_per_axis < 2 || points_per_axis > 2000)
    throw std::invalid_argument("oracle_grid: points_per_axis must be in [2, 2000]");

  int n = lp.n_slots;
  double p_sleep = sm.initial_power();
  double frame_bits = lp.rate * n;
  double step = am.p_max / (points_per_axis - 1);

  GridScan best{std::numeric_limits<double>::infinity(), step, 0, {}};
  std::vector<double> powers(n, 0.0);

  auto consider = [&](const std::vector<double>& p) {
    int n_a = 0;
    double load = 0.0;
    for (double v : p) {
      if (v > 0.0) {
        ++n_a;
        load += std::pow(v, am.alpha);
      }
    }
    double value = static_cast<double>(n_a) / n * am.p0 + am.gamma / n * load +
                   static_cast<double>(n - n_a) / n * p_sleep;
    if (value < best.p_cons) {
      best.p_cons = value;
      best.n_active = n_a;
      best.powers = p;
    }
  };

  // The last slot's power is solved from the rate constraint; the others walk
  // the grid. Slots at exactly zero power count as asleep.
  auto solve_last = [&](double used_bits) -> double {
    double left = frame_bits - used_bits;
    if (left <= 0.0) return 0.0;
    return power_for_rate(left, lp.sigma2);
  };

  if (n == 1) {
    double p = solve_last(0.0);
    if (p <= am.p_max * (1.0 + 1e-12)) {
      powers[0] = p;
      consider(powers);
    }
  } else if (n == 2) {
    for (int i = 0; i < points_per_axis; ++i) {
      powers[0] = i * step;
      double p = solve_last(slot_rate(powers[0], lp.sigma2));
      if (p > am.p_max * (1.0 + 1e-12)) continue;
      powers[1] = p;
      consider(powers);
    }
  } else {
    for (int i = 0; i < points_per_axis; ++i) {
      powers[0] = i * step;
      double bits0 = slot_rate(powers[0], lp.sigma2);
      for (int j = 0; j < points_per_axis; ++j) {
        powers[1] = j * step;
        double p = solve_last(bits0 + slot_rate(powers[1], lp.sigma2));
        if (p > am.p_max * (1.0 + 1e-12)) continue;
        powers[2] = p;
        consider(powers);
      }
    }
  }
  return best;
}

}  // namespace leanslot
