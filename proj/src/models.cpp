#include "leanslot/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace leanslot {

namespace {

constexpr double kEtA = 0.0082;  // envelope tracking fit constant

std::string infeasible_message(double rate, double r_max) {
  std::ostringstream os;
  os << "target rate " << rate << " bits/cu exceeds the frame limit r_max = " << r_max;
  return os.str();
}

}  // namespace

double LossFactors::efficiency() const {
  return (1.0 - sigma_dc) * (1.0 - sigma_ms) * (1.0 - sigma_cool);
}

PaClass PaClass::ideal(double p_sat) { return {PaKind::Ideal, p_sat, 1, 0.0}; }
PaClass PaClass::class_a(double p_sat) { return {PaKind::ClassA, p_sat, 1, 0.0}; }
PaClass PaClass::class_b(double p_sat) { return {PaKind::ClassB, p_sat, 1, 0.0}; }
PaClass PaClass::envelope_tracking(double p_sat, double eta_max) {
  return {PaKind::EnvelopeTracking, p_sat, 1, eta_max};
}
PaClass PaClass::doherty(double p_sat, int ways) {
  if (ways < 1) throw std::invalid_argument("doherty: ways must be >= 1");
  return {PaKind::Doherty, p_sat, ways, 0.0};
}

double pa_power(const PaClass& pa, double p) {
  if (p < 0.0 || p > pa.p_sat) throw std::domain_error("pa_power: p outside [0, p_sat]");
  switch (pa.kind) {
    case PaKind::Ideal:
      return p;
    case PaKind::ClassA:
      return 2.0 * pa.p_sat;
    case PaKind::ClassB:
      return (4.0 / std::numbers::pi) * std::sqrt(pa.p_sat * p);
    case PaKind::EnvelopeTracking: {
      double denom = (1.0 + kEtA) * pa.eta_max;
      return kEtA * pa.p_sat / denom + p / denom;
    }
    case PaKind::Doherty: {
      double ell = static_cast<double>(pa.ways);
      double xi = p / pa.p_sat;
      double front = 4.0 * pa.p_sat / (ell * std::numbers::pi);
      if (xi <= 1.0 / (ell * ell)) return front * std::sqrt(xi);
      return front * ((ell + 1.0) * std::sqrt(xi) - 1.0);
    }
  }
  throw std::logic_error("pa_power: unhandled PA kind");
}

namespace {

// (P_PA,0, beta, alpha) of the active-slot model p_pa0 + beta p^alpha.
struct PaFit {
  double p_pa0;
  double beta;
  double alpha;
};

PaFit fit_pa(const PaClass& pa) {
  switch (pa.kind) {
    case PaKind::Ideal:
      return {0.0, 1.0, 1.0};
    case PaKind::ClassA:
      return {2.0 * pa.p_sat, 0.0, 1.0};
    case PaKind::ClassB:
      return {0.0, (4.0 / std::numbers::pi) * std::sqrt(pa.p_sat), 0.5};
    case PaKind::EnvelopeTracking: {
      double denom = (1.0 + kEtA) * pa.eta_max;
      return {kEtA * pa.p_sat / denom, 1.0 / denom, 1.0};
    }
    case PaKind::Doherty:
      if (pa.ways == 1) return {0.0, (4.0 / std::numbers::pi) * std::sqrt(pa.p_sat), 0.5};
      throw std::invalid_argument(
          "active model: a multi-way Doherty curve is piecewise and has no single "
          "(gamma, alpha) representation");
  }
  throw std::logic_error("fit_pa: unhandled PA kind");
}

}  // namespace

ActiveModel active_model_from_pa(const PaClass& pa, const LossFactors& lf, double p_rf_bb,
                                 double p_max) {
  PaFit fit = fit_pa(pa);
  double eta = lf.efficiency();
  return {(p_rf_bb + fit.p_pa0) / eta, fit.beta / eta, fit.alpha, p_max};
}

ActiveModel active_model_with_p0(const PaClass& pa, const LossFactors& lf, double p0,
                                 double p_max) {
  PaFit fit = fit_pa(pa);
  return {p0, fit.beta / lf.efficiency(), fit.alpha, p_max};
}

ActiveModel class_b_model(double p0, double p_max, double backoff_db, const LossFactors& lf) {
  double p_sat = p_max * std::pow(10.0, backoff_db / 10.0);
  return active_model_with_p0(PaClass::class_b(p_sat), lf, p0, p_max);
}

SleepModel SleepModel::constant(double p_sleep) { return {{{0.0, p_sleep}}}; }

void SleepModel::validate() const {
  if (modes.empty()) throw std::invalid_argument("sleep model: needs at least one mode");
  if (modes.front().t_start != 0.0)
    throw std::invalid_argument("sleep model: first mode must start at t = 0");
  for (size_t i = 0; i < modes.size(); ++i) {
    if (!std::isfinite(modes[i].t_start) || !std::isfinite(modes[i].power) ||
        modes[i].power < 0.0)
      throw std::invalid_argument("sleep model: modes need finite start times and powers >= 0");
    if (i > 0 && modes[i].t_start <= modes[i - 1].t_start)
      throw std::invalid_argument("sleep model: mode start times must increase");
    if (i > 0 && modes[i].power > modes[i - 1].power)
      throw std::invalid_argument("sleep model: powers must not increase with depth");
  }
}

double sleep_energy(const SleepModel& sm, double t) {
  if (t <= 0.0) return 0.0;
  double e = 0.0;
  for (size_t i = 0; i < sm.modes.size(); ++i) {
    double begin = sm.modes[i].t_start;
    if (t <= begin) break;
    double end = i + 1 < sm.modes.size() ? std::min(t, sm.modes[i + 1].t_start) : t;
    e += sm.modes[i].power * (end - begin);
  }
  return e;
}

double achieved_rate(const Allocation& a, const LinkParams& lp) {
  double sum = 0.0;
  for (double p : a.powers) sum += std::log2(1.0 + p / lp.sigma2);
  return sum / lp.n_slots;
}

double p_cons(const ActiveModel& am, const SleepModel& sm, const LinkParams& lp,
              const Allocation& a) {
  double n = lp.n_slots;
  double load = 0.0;
  for (int i = 0; i < a.n_active; ++i) load += std::pow(a.powers[i], am.alpha);
  double idle = sleep_energy(sm, (n - a.n_active) * lp.symbol_duration) / (n * lp.symbol_duration);
  return a.n_active / n * am.p0 + am.gamma / n * load + idle;
}

InfeasibleRate::InfeasibleRate(double rate, double r_max)
    : std::domain_error(infeasible_message(rate, r_max)), rate_(rate), r_max_(r_max) {}

}  // namespace leanslot
