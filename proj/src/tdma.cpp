#include "leanslot/tdma.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "leanslot/scalaropt.hpp"

namespace leanslot {

namespace {

double power_for_rate(double x, double sigma2) {
  return sigma2 * std::expm1(x * std::numbers::ln2);
}

void check_users(const std::vector<TdmaUser>& users) {
  if (users.empty()) throw std::invalid_argument("tdma: needs at least one user");
  for (const TdmaUser& u : users) {
    if (!(u.sigma2_k > 0.0)) throw std::invalid_argument("tdma: sigma2_k must be > 0");
    if (!(u.rate_k >= 0.0)) throw std::invalid_argument("tdma: rate_k must be >= 0");
  }
}

TdmaUserDerived derive(const ActiveModel& am, double p_sleep, const TdmaUser& u) {
  TdmaUserDerived d{};
  d.r_k_max = r_max(am.p_max, u.sigma2_k);
  if (am.gamma == 0.0) {
    d.r_k_a = r_a_infinite_case();
  } else {
    double delta = (am.p0 - p_sleep) / (am.gamma * std::pow(u.sigma2_k, am.alpha));
    d.r_k_a = r_a({delta, am.alpha});
  }
  d.r_hat_k = std::min(d.r_k_a, d.r_k_max);
  double p_k_a = std::isinf(d.r_k_a) ? std::numeric_limits<double>::infinity()
                                     : power_for_rate(d.r_k_a, u.sigma2_k);
  d.p_hat_k = std::min(p_k_a, am.p_max);
  return d;
}

std::string binding_message(double load_fraction) {
  std::ostringstream os;
  os << "tdma: aggregate load " << load_fraction
     << " leaves no idle slots; the linear decomposition does not apply (see the "
        "always-on benchmark)";
  return os.str();
}

}  // namespace

BindingRegime::BindingRegime(double load_fraction, double uniform_benchmark_w)
    : std::domain_error(binding_message(load_fraction)),
      load_fraction_(load_fraction),
      uniform_benchmark_w_(uniform_benchmark_w) {}

bool tdma_feasible(const ActiveModel& am, const std::vector<TdmaUser>& users, int n_slots) {
  check_users(users);
  long needed = 0;
  for (const TdmaUser& u : users) {
    double rk_max = r_max(am.p_max, u.sigma2_k);
    needed += static_cast<long>(std::ceil(u.rate_k * n_slots / rk_max - 1e-12));
  }
  return needed <= n_slots;
}

double tdma_uniform_benchmark(const ActiveModel& am, const std::vector<TdmaUser>& users) {
  check_users(users);
  double sum_rate = 0.0;
  for (const TdmaUser& u : users) sum_rate += u.rate_k;
  if (sum_rate == 0.0) return am.p0;

  double load = 0.0;
  for (const TdmaUser& u : users) {
    // Share N_k/N = R_k / sum R, so each active slot of user k carries sum R bits.
    double p_k = power_for_rate(sum_rate, u.sigma2_k);
    if (p_k > am.p_max * (1.0 + 1e-12))
      throw InfeasibleRate(sum_rate, r_max(am.p_max, u.sigma2_k));
    load += u.rate_k / sum_rate * std::pow(p_k, am.alpha);
  }
  return am.p0 + am.gamma * load;
}

TdmaResult tdma_allocate_linear(const ActiveModel& am, const SleepModel& sm,
                                const std::vector<TdmaUser>& users, int n_slots,
                                double symbol_duration) {
  check_users(users);
  sm.validate();
  if (!sm.single_mode())
    throw std::invalid_argument("tdma_allocate_linear: needs a constant sleep power");
  if (n_slots < 1) throw std::invalid_argument("tdma_allocate_linear: n_slots must be >= 1");

  auto benchmark_or_nan = [&]() {
    try {
      return tdma_uniform_benchmark(am, users);
    } catch (const InfeasibleRate&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  TdmaResult res;
  double p_sleep = sm.initial_power();
  double load_fraction = 0.0;
  for (const TdmaUser& u : users) {
    TdmaUserDerived d = derive(am, p_sleep, u);
    if (u.rate_k > d.r_k_max * (1.0 + 1e-12)) throw InfeasibleRate(u.rate_k, d.r_k_max);
    load_fraction += u.rate_k / d.r_hat_k;
    res.derived.push_back(d);
  }
  if (load_fraction > 1.0 + 1e-12) throw BindingRegime(load_fraction, benchmark_or_nan());

  double n = n_slots;
  long total = 0;
  for (size_t k = 0; k < users.size(); ++k) {
    const TdmaUser& u = users[k];
    const TdmaUserDerived& d = res.derived[k];
    long n_k = std::lround(u.rate_k * n / d.r_hat_k);
    // Keep the adjusted per-user power under the cap and within the frame.
    long floor_k = u.rate_k > 0.0
                       ? static_cast<long>(std::ceil(u.rate_k * n / d.r_k_max - 1e-9))
                       : 0;
    n_k = std::max(n_k, std::max(floor_k, static_cast<long>(u.rate_k > 0.0 ? 1 : 0)));
    n_k = std::min(n_k, static_cast<long>(n_slots));
    res.n_k.push_back(static_cast<int>(n_k));
    total += n_k;
  }
  if (total > n_slots) throw BindingRegime(load_fraction, benchmark_or_nan());

  res.alloc.n_active = static_cast<int>(total);
  res.alloc.powers.assign(n_slots, 0.0);
  int cursor = 0;
  for (size_t k = 0; k < users.size(); ++k) {
    if (res.n_k[k] == 0) continue;
    double p = power_for_rate(users[k].rate_k * n / res.n_k[k], users[k].sigma2_k);
    for (int i = 0; i < res.n_k[k]; ++i) res.alloc.powers[cursor++] = p;
  }

  double closed = p_sleep;
  for (size_t k = 0; k < users.size(); ++k)
    closed += users[k].rate_k *
              (am.p0 - p_sleep + am.gamma * std::pow(res.derived[k].p_hat_k, am.alpha)) /
              res.derived[k].r_hat_k;
  res.p_cons = closed;

  // Finite evaluation: the noise level varies per slot, so expand the frame
  // average by hand instead of using the single-sigma2 evaluator.
  double active_load = 0.0;
  for (int i = 0; i < res.alloc.n_active; ++i)
    active_load += std::pow(res.alloc.powers[i], am.alpha);
  double idle = sleep_energy(sm, (n - res.alloc.n_active) * symbol_duration) /
                (n * symbol_duration);
  res.p_cons_finite = res.alloc.n_active / n * am.p0 + am.gamma / n * active_load + idle;
  return res;
}

}  // namespace leanslot
