#include "leanslot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <vector>

#include "leanslot/alloc.hpp"
#include "leanslot/oracle.hpp"
#include "leanslot/scalaropt.hpp"
#include "leanslot/sleep_sched.hpp"
#include "leanslot/tdma.hpp"

namespace leanslot {

namespace {

constexpr const char* kCsvHeader =
    "R,se,regime,n_active,p_cons_exact,p_cons_asymptotic,p_cons_uniform,p_cons_rush,"
    "p_cons_successive,ee";

constexpr const char* kInfeasible = "INFEASIBLE";

int thread_count(int n_jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  int count = hw > 0 ? static_cast<int>(hw) : 1;
  if (const char* env = std::getenv("LEANSLOT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) count = static_cast<int>(std::min(v, 64L));
  }
  return std::max(1, std::min(count, n_jobs));
}

bool enabled(const Scenario& sc, SolverKind k) {
  return std::find(sc.solvers.begin(), sc.solvers.end(), k) != sc.solvers.end();
}

double sweep_limit(const Scenario& sc) {
  if (sc.sweep_var == SweepVar::RatePair) {
    double limit = std::numeric_limits<double>::infinity();
    for (const TdmaUser& u : sc.users) limit = std::min(limit, r_max(sc.p_max_w, u.sigma2_k));
    return limit;
  }
  double limit = r_max(sc.p_max_w, sc.sigma2_w);
  return sc.sweep_var == SweepVar::Se ? limit / (1.0 + sc.rolloff) : limit;
}

std::vector<double> sweep_grid(const Scenario& sc) {
  double lo = sc.sweep_lo;
  double hi = sc.sweep_hi.value_or(sweep_limit(sc));
  std::vector<double> grid;
  grid.reserve(sc.sweep_points);
  for (int i = 0; i < sc.sweep_points; ++i) {
    double t = sc.sweep_points == 1 ? 0.0
                                    : static_cast<double>(i) / (sc.sweep_points - 1);
    grid.push_back(lo + t * (hi - lo));
  }
  return grid;
}

// One sweep row's cells, all preformatted.
struct Cells {
  std::string r, se, regime, n_active;
  std::string exact, asym, uniform, rush, successive, ee;

  [[nodiscard]] std::string line() const {
    return r + "," + se + "," + regime + "," + n_active + "," + exact + "," + asym + "," +
           uniform + "," + rush + "," + successive + "," + ee;
  }
};

struct RowScratch {
  Cells cells;
  // numeric values kept for the summary
  double p_exact = std::numeric_limits<double>::quiet_NaN();
  double p_asym = std::numeric_limits<double>::quiet_NaN();
  double p_uniform = std::numeric_limits<double>::quiet_NaN();
  double p_rush = std::numeric_limits<double>::quiet_NaN();
  double p_successive = std::numeric_limits<double>::quiet_NaN();
  bool infeasible = false;
};

RowScratch compute_row(const Scenario& sc, double var) {
  RowScratch row;
  double rate = sc.sweep_var == SweepVar::Se ? var * (1.0 + sc.rolloff) : var;
  row.cells.r = format_significant(rate, 6);
  row.cells.se = format_significant(rate / (1.0 + sc.rolloff), 6);

  ActiveModel am = scenario_active_model(sc);
  SleepModel sm = scenario_sleep_model(sc);

  if (sc.sweep_var == SweepVar::RatePair) {
    std::vector<TdmaUser> users = sc.users;
    for (TdmaUser& u : users) u.rate_k = rate;
    row.cells.regime = "linear";
    try {
      TdmaResult t = tdma_allocate_linear(am, sm, users, sc.n_slots, sc.symbol_duration_s);
      int total = 0;
      for (int nk : t.n_k) total += nk;
      row.cells.n_active = std::to_string(total);
      row.p_exact = t.p_cons_finite;
      row.p_asym = t.p_cons;
      row.cells.exact = format_significant(t.p_cons_finite, 6);
      row.cells.asym = format_significant(t.p_cons, 6);
    } catch (const BindingRegime& e) {
      row.cells.exact = kInfeasible;
      row.cells.asym = kInfeasible;
      row.infeasible = true;
      if (std::isfinite(e.uniform_benchmark_w())) {
        row.p_uniform = e.uniform_benchmark_w();
        row.cells.uniform = format_significant(e.uniform_benchmark_w(), 6);
      } else {
        row.cells.uniform = kInfeasible;
      }
      return row;
    } catch (const std::domain_error&) {
      row.cells.exact = kInfeasible;
      row.cells.asym = kInfeasible;
      row.cells.uniform = kInfeasible;
      row.infeasible = true;
      return row;
    }
    try {
      row.p_uniform = tdma_uniform_benchmark(am, users);
      row.cells.uniform = format_significant(row.p_uniform, 6);
    } catch (const std::domain_error&) {
      row.cells.uniform = kInfeasible;
    }
    return row;
  }

  LinkParams lp = scenario_link(sc, rate);
  double rmax = r_max(am.p_max, lp.sigma2);

  // Scaling-regime label from the shallowest sleep mode.
  {
    double ra_val;
    if (am.gamma == 0.0) {
      ra_val = r_a_infinite_case();
    } else {
      double delta =
          (am.p0 - sm.initial_power()) / (am.gamma * std::pow(lp.sigma2, am.alpha));
      ra_val = r_a({delta, am.alpha});
    }
    row.cells.regime = rate <= std::min(ra_val, rmax) ? "linear" : "exponential";
  }

  if (rate > rmax * (1.0 + 1e-12)) {
    std::string* cells[] = {&row.cells.exact, &row.cells.asym, &row.cells.uniform,
                            &row.cells.rush, &row.cells.successive};
    SolverKind kinds[] = {SolverKind::Exact, SolverKind::Asymptotic, SolverKind::Uniform,
                          SolverKind::Rush, SolverKind::Successive};
    for (size_t i = 0; i < 5; ++i)
      if (enabled(sc, kinds[i])) *cells[i] = kInfeasible;
    row.infeasible = true;
    return row;
  }

  int n_active = -1;
  if (enabled(sc, SolverKind::Uniform)) {
    UniformResult u = allocate_uniform(am, sm, lp);
    row.p_uniform = u.p_cons;
    row.cells.uniform = format_significant(u.p_cons, 6);
    if (n_active < 0) n_active = u.alloc.n_active;
  }
  if (enabled(sc, SolverKind::Rush)) {
    RushResult r = allocate_rush_to_sleep(am, sm, lp);
    row.p_rush = r.p_cons;
    row.cells.rush = format_significant(r.p_cons, 6);
    n_active = r.alloc.n_active;
  }
  if (enabled(sc, SolverKind::Asymptotic)) {
    AsymptoticResult a = allocate_asymptotic(am, sm, lp);
    row.p_asym = a.p_cons;
    row.cells.asym = format_significant(a.p_cons, 6);
    n_active = a.alloc.n_active;
  }
  if (enabled(sc, SolverKind::Successive)) {
    SuccessiveResult s = allocate_successive(am, sm, lp);
    row.p_successive = s.p_cons;
    row.cells.successive = format_significant(s.p_cons, 6);
    n_active = s.alloc.n_active;
  }
  if (enabled(sc, SolverKind::Exact)) {
    ExactResult e = allocate_exact(am, sm, lp);
    row.p_exact = e.p_cons;
    row.cells.exact = format_significant(e.p_cons, 6);
    n_active = e.alloc.n_active;
  }
  if (n_active >= 0) row.cells.n_active = std::to_string(n_active);

  // EE from the most faithful enabled consumption figure.
  double p_for_ee = std::numeric_limits<double>::quiet_NaN();
  for (double p : {row.p_successive, row.p_asym, row.p_exact, row.p_rush, row.p_uniform}) {
    if (std::isfinite(p)) {
      p_for_ee = p;
      break;
    }
  }
  if (std::isfinite(p_for_ee) && p_for_ee > 0.0)
    row.cells.ee = format_significant(rate / (lp.symbol_duration * p_for_ee), 6);
  return row;
}

void min_max_line(std::ostringstream& os, const char* name,
                  const std::vector<RowScratch>& rows, double RowScratch::* member) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const RowScratch& r : rows) {
    double v = r.*member;
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo <= hi)
    os << "  " << name << ": [" << format_significant(lo, 6) << ", "
       << format_significant(hi, 6) << "] W\n";
}

}  // namespace

std::string format_significant(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

SweepOutput run_sweep(const Scenario& sc) {
  std::vector<double> grid = sweep_grid(sc);
  std::vector<RowScratch> rows(grid.size());

  int workers = thread_count(static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < grid.size(); ++i) rows[i] = compute_row(sc, grid[i]);
  } else {
    std::atomic<size_t> next{0};
    auto work = [&]() {
      for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
        rows[i] = compute_row(sc, grid[i]);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  std::string csv = std::string(kCsvHeader) + "\n";
  for (const RowScratch& r : rows) csv += r.cells.line() + "\n";

  std::ostringstream os;
  os << to_string(sc.sweep_var) << " sweep: " << sc.sweep_points << " points in ["
     << format_significant(sc.sweep_lo, 6) << ", "
     << format_significant(sc.sweep_hi.value_or(sweep_limit(sc)), 6) << "]\n";
  os << "frame: N=" << sc.n_slots << " slots, T=" << format_significant(sc.symbol_duration_s, 6)
     << " s, sigma2=" << format_significant(sc.sigma2_w, 6) << " W\n";
  ActiveModel am = scenario_active_model(sc);
  os << "model: " << sc.pa_class << " PA, p0=" << format_significant(am.p0, 6)
     << " W, gamma=" << format_significant(am.gamma, 6)
     << ", alpha=" << format_significant(am.alpha, 6)
     << ", p_max=" << format_significant(am.p_max, 6) << " W\n";
  os << "sleep: " << sc.sleep_modes.size() << " mode(s), initial "
     << format_significant(sc.sleep_modes.front().power, 6) << " W\n";
  os << "solvers:";
  for (SolverKind k : sc.solvers) os << " " << to_string(k);
  os << "\n";
  min_max_line(os, "p_cons_exact", rows, &RowScratch::p_exact);
  min_max_line(os, "p_cons_asymptotic", rows, &RowScratch::p_asym);
  min_max_line(os, "p_cons_uniform", rows, &RowScratch::p_uniform);
  min_max_line(os, "p_cons_rush", rows, &RowScratch::p_rush);
  min_max_line(os, "p_cons_successive", rows, &RowScratch::p_successive);
  int infeasible = 0;
  for (const RowScratch& r : rows) infeasible += r.infeasible ? 1 : 0;
  os << "infeasible rows: " << infeasible << "\n";
  return {csv, os.str()};
}

std::string run_point(const Scenario& sc, double rate) {
  ActiveModel am = scenario_active_model(sc);
  SleepModel sm = scenario_sleep_model(sc);
  std::ostringstream os;
  os << "R = " << format_significant(rate, 6) << " bits/cu\n";

  auto describe = [&](const char* name, const Allocation& a, double watts) {
    os << name << ": p_cons " << format_significant(watts, 6) << " W, n_active "
       << a.n_active;
    if (a.n_active > 0) {
      os << ", powers";
      int shown = 0;
      for (int i = 0; i < a.n_active && shown < 8; ++i, ++shown)
        os << " " << format_significant(a.powers[i], 6);
      if (a.n_active > 8) os << " ... (" << a.n_active << " total)";
      os << " W";
    }
    os << "\n";
  };

  if (sc.sweep_var == SweepVar::RatePair) {
    std::vector<TdmaUser> users = sc.users;
    for (TdmaUser& u : users) u.rate_k = rate;
    try {
      TdmaResult t = tdma_allocate_linear(am, sm, users, sc.n_slots, sc.symbol_duration_s);
      os << "tdma slots per user:";
      for (int nk : t.n_k) os << " " << nk;
      os << "\n";
      describe("tdma (finite)", t.alloc, t.p_cons_finite);
      os << "tdma (linear form): p_cons " << format_significant(t.p_cons, 6) << " W\n";
      os << "benchmark (always on): p_cons "
         << format_significant(tdma_uniform_benchmark(am, users), 6) << " W\n";
    } catch (const BindingRegime& e) {
      os << "tdma: binding regime, load fraction "
         << format_significant(e.load_fraction(), 6) << "\n";
      if (std::isfinite(e.uniform_benchmark_w()))
        os << "benchmark (always on): p_cons "
           << format_significant(e.uniform_benchmark_w(), 6) << " W\n";
      else
        os << "benchmark (always on): INFEASIBLE\n";
    } catch (const std::domain_error& e) {
      os << "tdma: " << e.what() << "\n";
    }
    return os.str();
  }

  LinkParams lp = scenario_link(sc, rate);
  for (SolverKind k : sc.solvers) {
    try {
      switch (k) {
        case SolverKind::Exact: {
          ExactResult e = allocate_exact(am, sm, lp);
          describe("exact", e.alloc, e.p_cons);
          os << "  slots pinned at p_max: " << e.clamped_slots << "\n";
          break;
        }
        case SolverKind::Asymptotic: {
          AsymptoticResult a = allocate_asymptotic(am, sm, lp);
          describe("asymptotic", a.alloc, a.p_cons);
          os << "  regime "
             << (a.report.regime == Regime::Linear ? "linear" : "exponential")
             << ", r_tilde " << format_significant(a.report.r_tilde, 6) << ", p_tilde "
             << format_significant(a.report.p_tilde, 6) << " W, finite-N gap "
             << format_significant(a.report.asymptotic_gap, 6) << " W\n";
          break;
        }
        case SolverKind::Uniform: {
          UniformResult u = allocate_uniform(am, sm, lp);
          describe("uniform", u.alloc, u.p_cons);
          break;
        }
        case SolverKind::Rush: {
          RushResult r = allocate_rush_to_sleep(am, sm, lp);
          describe("rush", r.alloc, r.p_cons);
          os << "  asymptotic form: " << format_significant(r.p_cons_asymptotic, 6)
             << " W\n";
          break;
        }
        case SolverKind::Successive: {
          SuccessiveResult s = allocate_successive(am, sm, lp);
          describe("successive", s.alloc, s.p_cons);
          os << "  chosen mode " << s.mode_index << " of " << s.candidates.size()
             << " feasible, continuous form "
             << format_significant(s.p_cons_asymptotic, 6) << " W\n";
          break;
        }
        case SolverKind::Tdma:
          break;  // unreachable: tdma forces sweep_var = rate_pair
      }
    } catch (const std::domain_error& e) {
      os << to_string(k) << ": " << e.what() << "\n";
    }
  }
  return os.str();
}

VerifyOutput run_verify(const Scenario& sc) {
  if (sc.sleep_modes.size() != 1)
    throw ScenarioError("verify needs a single sleep mode scenario");
  if (sc.sweep_var == SweepVar::RatePair)
    throw ScenarioError("verify works on single-user scenarios");
  if (sc.n_slots > 4096) throw ScenarioError("verify needs n_slots <= 4096");

  ActiveModel am = scenario_active_model(sc);
  SleepModel sm = scenario_sleep_model(sc);
  std::vector<double> grid = sweep_grid(sc);

  double worst = 0.0;
  double worst_rate = std::numeric_limits<double>::quiet_NaN();
  double worst_algo = std::numeric_limits<double>::quiet_NaN();
  OracleResult worst_oracle{};
  for (double var : grid) {
    double rate = sc.sweep_var == SweepVar::Se ? var * (1.0 + sc.rolloff) : var;
    LinkParams lp = scenario_link(sc, rate);
    ExactResult e = allocate_exact(am, sm, lp);
    OracleResult o = oracle_structured(am, sm, lp);
    double gap = (e.p_cons - o.best_p_cons) / o.best_p_cons;
    if (gap <= 1e-12) continue;  // evaluation-order rounding noise, not a real gap
    if (gap > worst) {
      worst = gap;
      worst_rate = rate;
      worst_algo = e.p_cons;
      worst_oracle = o;
    }
  }

  std::ostringstream os;
  os << "verify: iterative solver vs structured oracle\n";
  os << "grid: " << grid.size() << " points in ["
     << format_significant(sc.sweep_lo, 6) << ", "
     << format_significant(sc.sweep_hi.value_or(sweep_limit(sc)), 6) << "]\n";
  if (grid.empty() || worst == 0.0) {
    os << "worst relative gap: 0 (solver matches the oracle everywhere on the grid)\n";
  } else {
    os << "worst relative gap: " << format_significant(worst * 100.0, 6) << "% at R = "
       << format_significant(worst_rate, 6) << "\n";
    os << "  solver " << format_significant(worst_algo, 6) << " W vs oracle "
       << format_significant(worst_oracle.best_p_cons, 6) << " W (structure: "
       << worst_oracle.n_max_slots << " slots at p_max, " << worst_oracle.n_uniform_slots
       << " uniform at " << format_significant(worst_oracle.uniform_power, 6) << " W)\n";
  }
  return {os.str(), worst};
}

}  // namespace leanslot
