#include "leanslot/tradeoff.hpp"

#include <cmath>
#include <numbers>

#include "leanslot/alloc.hpp"
#include "leanslot/scalaropt.hpp"

namespace leanslot {

namespace {

double power_for_rate(double x, double sigma2) {
  return sigma2 * std::expm1(x * std::numbers::ln2);
}

// Large-N single-mode consumption at average rate r, closed form.
double asymptotic_p_cons(const ActiveModel& am, double p_sleep, double sigma2, double r,
                         double rmax) {
  double ra_val = am.gamma == 0.0
                      ? r_a_infinite_case()
                      : r_a({(am.p0 - p_sleep) / (am.gamma * std::pow(sigma2, am.alpha)),
                             am.alpha});
  double r_tilde = std::min(ra_val, rmax);
  if (r <= r_tilde) {
    double p_a = std::isinf(ra_val) ? std::numeric_limits<double>::infinity()
                                    : power_for_rate(ra_val, sigma2);
    double p_tilde = std::min(p_a, am.p_max);
    return p_sleep + r * (am.p0 - p_sleep + am.gamma * std::pow(p_tilde, am.alpha)) / r_tilde;
  }
  return am.p0 + am.gamma * std::pow(power_for_rate(r, sigma2), am.alpha);
}

EePoint make_point(double se, double ee, double symbol_duration, double rolloff) {
  return {se, ee, (1.0 + rolloff) / symbol_duration, rolloff};
}

}  // namespace

EePoint ee_for_se(const ActiveModel& am, const SleepModel& sm, double sigma2, double se,
                  double symbol_duration, double rolloff) {
  sm.validate();
  if (!sm.single_mode())
    throw std::invalid_argument("ee_for_se: needs a constant sleep power");
  if (!(se >= 0.0)) throw std::invalid_argument("ee_for_se: se must be >= 0");
  double r = se * (1.0 + rolloff);
  double rmax = r_max(am.p_max, sigma2);
  if (r > rmax * (1.0 + 1e-12)) throw InfeasibleRate(r, rmax);
  if (r == 0.0) return make_point(se, 0.0, symbol_duration, rolloff);
  double pc = asymptotic_p_cons(am, sm.initial_power(), sigma2, r, rmax);
  return make_point(se, r / (symbol_duration * pc), symbol_duration, rolloff);
}

EePoint max_ee(const ActiveModel& am, const SleepModel& sm, double sigma2,
               double symbol_duration, double rolloff) {
  sm.validate();
  if (!sm.single_mode()) throw std::invalid_argument("max_ee: needs a constant sleep power");
  double rmax = r_max(am.p_max, sigma2);
  double p_sleep = sm.initial_power();
  double sig_alpha = std::pow(sigma2, am.alpha);
  double ra_val =
      am.gamma == 0.0 ? r_a_infinite_case()
                      : r_a({(am.p0 - p_sleep) / (am.gamma * sig_alpha), am.alpha});

  double rbar;
  if (ra_val >= rmax) {
    // Spending more power per slot never pays: the efficiency peak sits at the cap.
    rbar = rmax;
  } else {
    // Interior optimum of (p0 + gamma sigma^2a (2^r - 1)^a) / r on [ra, rmax]:
    // the same objective family as r_a, with the full p0 in the numerator.
    rbar = std::clamp(r_a({am.p0 / (am.gamma * sig_alpha), am.alpha}, ra_val), ra_val, rmax);
  }
  double pc = am.p0 + am.gamma * std::pow(power_for_rate(rbar, sigma2), am.alpha);
  return make_point(rbar / (1.0 + rolloff), rbar / (symbol_duration * pc), symbol_duration,
                    rolloff);
}

std::vector<EePoint> ee_se_sweep_successive(const ActiveModel& am, const SleepModel& sm,
                                            int n_slots, double sigma2,
                                            double symbol_duration, double rolloff,
                                            const std::vector<double>& se_values) {
  sm.validate();
  double rmax = r_max(am.p_max, sigma2);
  std::vector<EePoint> out;
  out.reserve(se_values.size());
  for (double se : se_values) {
    if (se <= 0.0) {
      out.push_back(make_point(se, 0.0, symbol_duration, rolloff));
      continue;
    }
    double r = se * (1.0 + rolloff);
    if (r > rmax * (1.0 + 1e-12)) {
      out.push_back(make_point(se, std::numeric_limits<double>::quiet_NaN(),
                               symbol_duration, rolloff));
      continue;
    }
    SuccessiveResult s =
        allocate_successive(am, sm, {n_slots, symbol_duration, sigma2, r});
    out.push_back(make_point(se, r / (symbol_duration * s.p_cons), symbol_duration, rolloff));
  }
  return out;
}

}  // namespace leanslot
