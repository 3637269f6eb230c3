#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leanslot/models.hpp"
#include "leanslot/tdma.hpp"

namespace leanslot {

enum class SweepVar { Rate, Se, RatePair };

enum class SolverKind { Exact, Asymptotic, Uniform, Rush, Successive, Tdma };

/// A full experiment description: link, power models, and the sweep to run.
/// Parsed from a plain-text config (one `key = value` per line, `#` comments).
struct Scenario {
  // link
  int n_slots = 0;
  double symbol_duration_s = 0.0;
  double sigma2_w = 0.0;

  // active consumption model
  std::string pa_class = "classb";  ///< ideal | classa | classb | et
  double backoff_db = 8.0;          ///< p_sat = p_max * 10^(backoff_db/10)
  double p0_w = 110.0;              ///< load-independent active power
  double p_max_w = 20.0;

  // sleep consumption model: (entry lead time, power) pairs
  std::vector<SleepModel::Mode> sleep_modes;

  double rolloff = 0.1;

  // sweep
  SweepVar sweep_var = SweepVar::Rate;
  double sweep_lo = 0.01;
  std::optional<double> sweep_hi;  ///< empty = auto (feasibility limit)
  int sweep_points = 25;
  std::vector<SolverKind> solvers;  ///< ordered, no duplicates
  std::vector<TdmaUser> users;      ///< only read by the tdma solver

  [[nodiscard]] bool operator==(const Scenario&) const = default;
};

/// Config-file rejection; the message names the offending line.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse and validate a scenario config. Unknown keys, malformed values and
/// violated invariants throw ScenarioError naming the line. Omitted keys fall
/// back to the reference base-station defaults (class B amplifier, 8 dB
/// back-off, 110 W overhead, 20 W cap, the four-mode sleep table). Bounds that
/// land outside feasibility are clipped and reported through `warnings`.
[[nodiscard]] Scenario parse_scenario(const std::string& text,
                                      std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_scenario: emits a config that parses back to the same
/// Scenario, field for field.
[[nodiscard]] std::string render_scenario(const Scenario& sc);

/// Model builders from a validated scenario.
[[nodiscard]] ActiveModel scenario_active_model(const Scenario& sc);
[[nodiscard]] SleepModel scenario_sleep_model(const Scenario& sc);
[[nodiscard]] LinkParams scenario_link(const Scenario& sc, double rate);

[[nodiscard]] std::string to_string(SweepVar v);
[[nodiscard]] std::string to_string(SolverKind s);

}  // namespace leanslot
