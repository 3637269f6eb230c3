#include "leanslot/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "leanslot/alloc.hpp"

namespace leanslot {

namespace {

constexpr double kEtEtaMax = 0.785398163397448;  // pi/4, class-B peak efficiency

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& line, const std::string& why) {
  std::ostringstream os;
  os << "config line " << line_no << " ('" << line << "'): " << why;
  throw ScenarioError(os.str());
}

double parse_double(int line_no, const std::string& line, const std::string& value) {
  const char* begin = value.data();
  const char* end = begin + value.size();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) fail(line_no, line, "expected a number");
  return out;
}

long parse_int(int line_no, const std::string& line, const std::string& value) {
  const char* begin = value.data();
  const char* end = begin + value.size();
  long out = 0;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) fail(line_no, line, "expected an integer");
  return out;
}

std::string shortest(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

SolverKind parse_solver(int line_no, const std::string& line, const std::string& token) {
  if (token == "exact") return SolverKind::Exact;
  if (token == "asymptotic") return SolverKind::Asymptotic;
  if (token == "uniform") return SolverKind::Uniform;
  if (token == "rush") return SolverKind::Rush;
  if (token == "successive") return SolverKind::Successive;
  if (token == "tdma") return SolverKind::Tdma;
  fail(line_no, line, "unknown solver '" + token + "'");
}

const std::vector<SleepModel::Mode>& default_sleep_modes() {
  static const std::vector<SleepModel::Mode> kModes{
      {0.0, 50.0}, {6e-3, 25.0}, {50e-3, 1.0}, {1.0, 0.1}};
  return kModes;
}

}  // namespace

std::string to_string(SweepVar v) {
  switch (v) {
    case SweepVar::Rate: return "rate";
    case SweepVar::Se: return "se";
    case SweepVar::RatePair: return "rate_pair";
  }
  return "?";
}

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Exact: return "exact";
    case SolverKind::Asymptotic: return "asymptotic";
    case SolverKind::Uniform: return "uniform";
    case SolverKind::Rush: return "rush";
    case SolverKind::Successive: return "successive";
    case SolverKind::Tdma: return "tdma";
  }
  return "?";
}

Scenario parse_scenario(const std::string& text, std::vector<std::string>* warnings) {
  Scenario sc;
  std::map<std::string, int> seen;
  std::map<int, double> mode_starts;
  std::map<int, double> mode_powers;
  bool have_n = false, have_t = false, have_sigma = false, have_solvers = false;

  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string line = raw;
    if (size_t hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, raw, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, raw, "empty key");
    if (value.empty()) fail(line_no, raw, "empty value");
    if (!seen.emplace(key, line_no).second)
      fail(line_no, raw, "duplicate key '" + key + "' (first on line " +
                             std::to_string(seen[key]) + ")");

    if (key == "n_slots") {
      sc.n_slots = static_cast<int>(parse_int(line_no, raw, value));
      have_n = true;
    } else if (key == "symbol_duration_s") {
      sc.symbol_duration_s = parse_double(line_no, raw, value);
      have_t = true;
    } else if (key == "sigma2_w") {
      sc.sigma2_w = parse_double(line_no, raw, value);
      have_sigma = true;
    } else if (key == "p_max_w") {
      sc.p_max_w = parse_double(line_no, raw, value);
    } else if (key == "pa_class") {
      if (value != "ideal" && value != "classa" && value != "classb" && value != "et")
        fail(line_no, raw, "pa_class must be one of ideal, classa, classb, et");
      sc.pa_class = value;
    } else if (key == "backoff_db") {
      sc.backoff_db = parse_double(line_no, raw, value);
    } else if (key == "p0_w") {
      sc.p0_w = parse_double(line_no, raw, value);
    } else if (key == "rolloff") {
      sc.rolloff = parse_double(line_no, raw, value);
    } else if (key == "sweep_var") {
      if (value == "rate")
        sc.sweep_var = SweepVar::Rate;
      else if (value == "se")
        sc.sweep_var = SweepVar::Se;
      else if (value == "rate_pair")
        sc.sweep_var = SweepVar::RatePair;
      else
        fail(line_no, raw, "sweep_var must be one of rate, se, rate_pair");
    } else if (key == "sweep_lo") {
      sc.sweep_lo = parse_double(line_no, raw, value);
    } else if (key == "sweep_hi") {
      if (value == "auto")
        sc.sweep_hi.reset();
      else
        sc.sweep_hi = parse_double(line_no, raw, value);
    } else if (key == "sweep_points") {
      sc.sweep_points = static_cast<int>(parse_int(line_no, raw, value));
    } else if (key == "solvers") {
      sc.solvers.clear();
      for (const std::string& token : split(value, ',')) {
        SolverKind k = parse_solver(line_no, raw, token);
        if (std::find(sc.solvers.begin(), sc.solvers.end(), k) != sc.solvers.end())
          fail(line_no, raw, "solver '" + token + "' listed twice");
        sc.solvers.push_back(k);
      }
      if (sc.solvers.empty()) fail(line_no, raw, "solvers list is empty");
      have_solvers = true;
    } else if (key == "users") {
      sc.users.clear();
      for (const std::string& token : split(value, ',')) {
        size_t colon = token.find(':');
        if (colon == std::string::npos)
          fail(line_no, raw, "each user is 'sigma2_w:rate', got '" + token + "'");
        TdmaUser u{parse_double(line_no, raw, trim(token.substr(0, colon))),
                   parse_double(line_no, raw, trim(token.substr(colon + 1)))};
        sc.users.push_back(u);
      }
    } else if (key.starts_with("sleep_mode_")) {
      std::string rest = key.substr(11);
      size_t us = rest.find('_');
      if (us == std::string::npos) fail(line_no, raw, "unknown key '" + key + "'");
      long idx = -1;
      {
        const char* b = rest.data();
        auto [ptr, ec] = std::from_chars(b, b + us, idx);
        if (ec != std::errc() || ptr != b + us || idx < 0)
          fail(line_no, raw, "bad sleep mode index in '" + key + "'");
      }
      std::string field = rest.substr(us + 1);
      if (field == "start_s")
        mode_starts[static_cast<int>(idx)] = parse_double(line_no, raw, value);
      else if (field == "power_w")
        mode_powers[static_cast<int>(idx)] = parse_double(line_no, raw, value);
      else
        fail(line_no, raw, "unknown key '" + key + "'");
    } else {
      fail(line_no, raw, "unknown key '" + key + "'");
    }
  }

  std::vector<std::string> missing;
  if (!have_n) missing.push_back("n_slots");
  if (!have_t) missing.push_back("symbol_duration_s");
  if (!have_sigma) missing.push_back("sigma2_w");
  if (!missing.empty()) {
    std::string m = "missing required keys:";
    for (const std::string& k : missing) m += " " + k;
    throw ScenarioError(m);
  }

  if (mode_starts.empty() && mode_powers.empty()) {
    sc.sleep_modes = default_sleep_modes();
  } else {
    if (mode_starts.size() != mode_powers.size())
      throw ScenarioError("sleep modes: every index needs both start_s and power_w");
    int expect = 0;
    for (const auto& [idx, start] : mode_starts) {
      if (idx != expect)
        throw ScenarioError("sleep modes: indices must run 0,1,... without gaps");
      if (!mode_powers.count(idx))
        throw ScenarioError("sleep modes: index " + std::to_string(idx) + " lacks power_w");
      sc.sleep_modes.push_back({start, mode_powers[idx]});
      ++expect;
    }
  }

  if (!have_solvers) {
    if (sc.sleep_modes.size() == 1)
      sc.solvers = {SolverKind::Exact, SolverKind::Asymptotic, SolverKind::Uniform,
                    SolverKind::Rush};
    else
      sc.solvers = {SolverKind::Successive};
  }

  // cross-field validation
  if (sc.n_slots < 1) throw ScenarioError("n_slots must be >= 1");
  if (!(sc.symbol_duration_s > 0.0)) throw ScenarioError("symbol_duration_s must be > 0");
  if (!(sc.sigma2_w > 0.0)) throw ScenarioError("sigma2_w must be > 0");
  if (!(sc.p_max_w > 0.0)) throw ScenarioError("p_max_w must be > 0");
  if (!(sc.p0_w >= 0.0)) throw ScenarioError("p0_w must be >= 0");
  if (!(sc.backoff_db >= 0.0)) throw ScenarioError("backoff_db must be >= 0");
  if (!(sc.rolloff >= 0.0 && sc.rolloff <= 1.0)) throw ScenarioError("rolloff must be in [0, 1]");
  if (sc.sweep_points < 0) throw ScenarioError("sweep_points must be >= 0");
  if (!(sc.sweep_lo > 0.0)) throw ScenarioError("sweep_lo must be > 0");
  SleepModel sleep{sc.sleep_modes};
  try {
    sleep.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  for (const TdmaUser& u : sc.users) {
    if (!(u.sigma2_k > 0.0)) throw ScenarioError("users: sigma2_w must be > 0");
    if (!(u.rate_k >= 0.0)) throw ScenarioError("users: rate must be >= 0");
  }

  bool has_tdma = std::find(sc.solvers.begin(), sc.solvers.end(), SolverKind::Tdma) !=
                  sc.solvers.end();
  if (has_tdma && sc.users.empty())
    throw ScenarioError("solver tdma needs a users list");
  if (has_tdma && sc.solvers.size() > 1)
    throw ScenarioError("solver tdma cannot be combined with other solvers");
  if (has_tdma && sc.sweep_var != SweepVar::RatePair)
    throw ScenarioError("solver tdma needs sweep_var = rate_pair");
  if (sc.sweep_var == SweepVar::RatePair) {
    if (sc.users.size() != 2)
      throw ScenarioError("sweep_var rate_pair needs exactly 2 users");
    if (!has_tdma) throw ScenarioError("sweep_var rate_pair needs the tdma solver");
  }
  for (SolverKind k : sc.solvers) {
    bool constant_only = k == SolverKind::Exact || k == SolverKind::Asymptotic ||
                         k == SolverKind::Tdma;
    if (constant_only && sc.sleep_modes.size() != 1)
      throw ScenarioError("solver " + to_string(k) +
                          " needs a single sleep mode; this scenario has " +
                          std::to_string(sc.sleep_modes.size()));
  }

  // sweep bound feasibility
  double limit;
  if (sc.sweep_var == SweepVar::RatePair) {
    limit = std::numeric_limits<double>::infinity();
    for (const TdmaUser& u : sc.users)
      limit = std::min(limit, r_max(sc.p_max_w, u.sigma2_k));
  } else {
    limit = r_max(sc.p_max_w, sc.sigma2_w);
    if (sc.sweep_var == SweepVar::Se) limit /= 1.0 + sc.rolloff;
  }
  if (sc.sweep_lo > limit)
    throw ScenarioError("sweep_lo " + shortest(sc.sweep_lo) +
                        " exceeds the feasibility limit " + shortest(limit));
  if (sc.sweep_hi) {
    if (*sc.sweep_hi < sc.sweep_lo)
      throw ScenarioError("sweep_hi must be >= sweep_lo");
    if (*sc.sweep_hi > limit) {
      if (warnings)
        warnings->push_back("sweep_hi clipped from " + shortest(*sc.sweep_hi) + " to " +
                            shortest(limit) + " (feasibility limit)");
      sc.sweep_hi = limit;
    }
  }
  return sc;
}

std::string render_scenario(const Scenario& sc) {
  std::ostringstream os;
  os << "n_slots = " << sc.n_slots << "\n";
  os << "symbol_duration_s = " << shortest(sc.symbol_duration_s) << "\n";
  os << "sigma2_w = " << shortest(sc.sigma2_w) << "\n";
  os << "p_max_w = " << shortest(sc.p_max_w) << "\n";
  os << "pa_class = " << sc.pa_class << "\n";
  os << "backoff_db = " << shortest(sc.backoff_db) << "\n";
  os << "p0_w = " << shortest(sc.p0_w) << "\n";
  for (size_t s = 0; s < sc.sleep_modes.size(); ++s) {
    os << "sleep_mode_" << s << "_start_s = " << shortest(sc.sleep_modes[s].t_start) << "\n";
    os << "sleep_mode_" << s << "_power_w = " << shortest(sc.sleep_modes[s].power) << "\n";
  }
  os << "rolloff = " << shortest(sc.rolloff) << "\n";
  os << "sweep_var = " << to_string(sc.sweep_var) << "\n";
  os << "sweep_lo = " << shortest(sc.sweep_lo) << "\n";
  os << "sweep_hi = " << (sc.sweep_hi ? shortest(*sc.sweep_hi) : "auto") << "\n";
  os << "sweep_points = " << sc.sweep_points << "\n";
  os << "solvers = ";
  for (size_t i = 0; i < sc.solvers.size(); ++i)
    os << (i ? ", " : "") << to_string(sc.solvers[i]);
  os << "\n";
  if (!sc.users.empty()) {
    os << "users = ";
    for (size_t i = 0; i < sc.users.size(); ++i)
      os << (i ? ", " : "") << shortest(sc.users[i].sigma2_k) << ":"
         << shortest(sc.users[i].rate_k);
    os << "\n";
  }
  return os.str();
}

ActiveModel scenario_active_model(const Scenario& sc) {
  double p_sat = sc.p_max_w * std::pow(10.0, sc.backoff_db / 10.0);
  PaClass pa;
  if (sc.pa_class == "ideal")
    pa = PaClass::ideal(p_sat);
  else if (sc.pa_class == "classa")
    pa = PaClass::class_a(p_sat);
  else if (sc.pa_class == "classb")
    pa = PaClass::class_b(p_sat);
  else if (sc.pa_class == "et")
    pa = PaClass::envelope_tracking(p_sat, kEtEtaMax);
  else
    throw ScenarioError("unknown pa_class '" + sc.pa_class + "'");
  return active_model_with_p0(pa, LossFactors{}, sc.p0_w, sc.p_max_w);
}

SleepModel scenario_sleep_model(const Scenario& sc) { return {sc.sleep_modes}; }

LinkParams scenario_link(const Scenario& sc, double rate) {
  return {sc.n_slots, sc.symbol_duration_s, sc.sigma2_w, rate};
}

}  // namespace leanslot
