#include "leanslot/alloc.hpp"

#include <cmath>
#include <numbers>

#include "leanslot/scalaropt.hpp"

namespace leanslot {

namespace {

// (2^x - 1)^alpha without overflow for large x.
double pow_rate_term(double alpha, double x) {
  if (x <= 0.0) return 0.0;
  double u = x * std::numbers::ln2;
  double log_e = u > 36.0 ? u + std::log1p(-std::exp(-u)) : std::log(std::expm1(u));
  return std::exp(alpha * log_e);
}

// (2^x - 1) sigma2: the power carrying x bits per channel use.
double power_for_rate(double x, double sigma2) {
  return sigma2 * std::expm1(x * std::numbers::ln2);
}

void check_link(const LinkParams& lp) {
  if (lp.n_slots < 1) throw std::invalid_argument("allocation: n_slots must be >= 1");
  if (!(lp.symbol_duration > 0.0)) throw std::invalid_argument("allocation: T must be > 0");
  if (!(lp.sigma2 > 0.0)) throw std::invalid_argument("allocation: sigma2 must be > 0");
  if (!(lp.rate >= 0.0)) throw std::invalid_argument("allocation: rate must be >= 0");
}

void check_constant_sleep(const SleepModel& sm, const char* who) {
  sm.validate();
  if (!sm.single_mode())
    throw std::invalid_argument(std::string(who) +
                                ": needs a constant sleep power; use the multi-mode scheduler");
}

void check_feasible(double rate, double rmax) {
  if (rate > rmax * (1.0 + 1e-12)) throw InfeasibleRate(rate, rmax);
}

// Rate constant of the cap-free per-slot problem; +inf when gamma = 0.
double slot_rate_constant(const ActiveModel& am, double p_sleep, double sigma2) {
  if (am.gamma == 0.0) return r_a_infinite_case();
  double delta = (am.p0 - p_sleep) / (am.gamma * std::pow(sigma2, am.alpha));
  return r_a({delta, am.alpha});
}

Allocation uniform_allocation(int n_slots, int n_active, double rate, double sigma2) {
  Allocation a;
  a.n_active = n_active;
  a.powers.assign(n_slots, 0.0);
  if (n_active > 0) {
    double p = power_for_rate(rate * n_slots / n_active, sigma2);
    for (int i = 0; i < n_active; ++i) a.powers[i] = p;
  }
  return a;
}

}  // namespace

double r_max(double p_max, double sigma2) { return std::log2(1.0 + p_max / sigma2); }

Allocation allocate_no_pmax(const ActiveModel& am, const SleepModel& sm, const LinkParams& lp) {
  check_link(lp);
  check_constant_sleep(sm, "allocate_no_pmax");
  double n = lp.n_slots;
  double p_sleep = sm.initial_power();
  double ra_val = slot_rate_constant(am, p_sleep, lp.sigma2);

  if (std::isinf(ra_val))  // load-independent: just use as few slots as possible
    return uniform_allocation(lp.n_slots, lp.rate > 0.0 ? 1 : 0, lp.rate, lp.sigma2);

  double sig_alpha = std::pow(lp.sigma2, am.alpha);
  auto cost = [&](long n_a) -> double {
    if (n_a == 0) return lp.rate > 0.0 ? std::numeric_limits<double>::infinity() : p_sleep;
    double load = pow_rate_term(am.alpha, lp.rate * n / static_cast<double>(n_a));
    return n_a / n * (am.p0 + am.gamma * sig_alpha * load) + (n - n_a) / n * p_sleep;
  };
  long n_a = ceil_floor(std::min(lp.rate * n / ra_val, n), cost);
  return uniform_allocation(lp.n_slots, static_cast<int>(n_a), lp.rate, lp.sigma2);
}

ExactResult allocate_exact(const ActiveModel& am, const SleepModel& sm, const LinkParams& lp) {
  check_link(lp);
  check_constant_sleep(sm, "allocate_exact");
  double rmax = r_max(am.p_max, lp.sigma2);
  check_feasible(lp.rate, rmax);

  // Pin slots at p_max one at a time until the cap-free solution of the
  // residual problem respects the cap.
  int n_max = 0;
  int n = lp.n_slots;
  double rate = lp.rate;
  Allocation base;
  double p_uniform = 0.0;
  for (;;) {
    base = allocate_no_pmax(am, sm, {n, lp.symbol_duration, lp.sigma2, std::max(rate, 0.0)});
    p_uniform = base.n_active > 0 ? base.powers[0] : 0.0;
    if (p_uniform <= am.p_max * (1.0 + 1e-12) || n <= 1) break;
    ++n_max;
    rate = (n * rate - rmax) / (n - 1);
    --n;
  }
  if (p_uniform > am.p_max * (1.0 + 1e-12)) {
    // Single remaining slot still over cap: only possible through accumulated
    // roundoff when rate ~ rmax; pin it too.
    ++n_max;
    base = Allocation{0, std::vector<double>(0)};
  }

  Allocation a;
  a.n_active = n_max + base.n_active;
  a.powers.assign(lp.n_slots, 0.0);
  for (int i = 0; i < n_max; ++i) a.powers[i] = am.p_max;
  for (int i = 0; i < base.n_active; ++i) a.powers[n_max + i] = base.powers[i];
  return {a, p_cons(am, sm, lp, a), n_max};
}

AsymptoticResult allocate_asymptotic(const ActiveModel& am, const SleepModel& sm,
                                     const LinkParams& lp) {
  check_link(lp);
  check_constant_sleep(sm, "allocate_asymptotic");
  double rmax = r_max(am.p_max, lp.sigma2);
  check_feasible(lp.rate, rmax);
  double p_sleep = sm.initial_power();
  double ra_val = slot_rate_constant(am, p_sleep, lp.sigma2);
  double p_a = std::isinf(ra_val) ? std::numeric_limits<double>::infinity()
                                  : power_for_rate(ra_val, lp.sigma2);
  double r_tilde = std::min(ra_val, rmax);
  double p_tilde = std::min(p_a, am.p_max);

  RegimeReport rep{};
  rep.r_max = rmax;
  rep.r_a = ra_val;
  rep.p_a = p_a;
  rep.r_tilde = r_tilde;
  rep.p_tilde = p_tilde;

  Allocation a;
  a.powers.assign(lp.n_slots, 0.0);
  double closed;
  if (lp.rate <= r_tilde) {
    rep.regime = Regime::Linear;
    a.n_active = static_cast<int>(std::round(lp.rate * lp.n_slots / r_tilde));
    for (int i = 0; i < a.n_active; ++i) a.powers[i] = p_tilde;
    closed = p_sleep +
             lp.rate * (am.p0 - p_sleep + am.gamma * std::pow(p_tilde, am.alpha)) / r_tilde;
  } else {
    rep.regime = Regime::Exponential;
    a.n_active = lp.n_slots;
    double p = power_for_rate(lp.rate, lp.sigma2);
    for (int i = 0; i < a.n_active; ++i) a.powers[i] = p;
    closed = am.p0 + am.gamma * std::pow(p, am.alpha);
  }
  rep.asymptotic_gap = p_cons(am, sm, lp, a) - closed;
  return {a, rep, closed};
}

UniformResult allocate_uniform(const ActiveModel& am, const SleepModel& sm,
                               const LinkParams& lp) {
  check_link(lp);
  sm.validate();
  check_feasible(lp.rate, r_max(am.p_max, lp.sigma2));
  // The whole frame stays active even as R -> 0: this benchmark never sleeps.
  Allocation a = uniform_allocation(lp.n_slots, lp.n_slots, lp.rate, lp.sigma2);
  return {a, p_cons(am, sm, lp, a)};
}

RushResult allocate_rush_to_sleep(const ActiveModel& am, const SleepModel& sm,
                                  const LinkParams& lp) {
  check_link(lp);
  sm.validate();
  double rmax = r_max(am.p_max, lp.sigma2);
  check_feasible(lp.rate, rmax);

  double frame_bits = lp.rate * lp.n_slots;  // bits per frame, in channel-use units
  long full = std::max(0L, static_cast<long>(std::ceil(frame_bits / rmax)) - 1);
  int n_full = static_cast<int>(std::min<long>(full, lp.n_slots));
  double residual = frame_bits - static_cast<double>(n_full) * rmax;

  Allocation a;
  a.powers.assign(lp.n_slots, 0.0);
  for (int i = 0; i < n_full; ++i) a.powers[i] = am.p_max;
  a.n_active = n_full;
  if (residual > 0.0 && n_full < lp.n_slots) {
    a.powers[n_full] = std::min(power_for_rate(residual, lp.sigma2), am.p_max);
    a.n_active = n_full + 1;
  }

  double p_sleep = sm.initial_power();
  double asym = p_sleep + lp.rate / rmax *
                              (am.p0 - p_sleep + am.gamma * std::pow(am.p_max, am.alpha));
  return {a, p_cons(am, sm, lp, a), asym};
}

}  // namespace leanslot
