#pragma once

#include <string>

#include "leanslot/scenario.hpp"

namespace leanslot {

/// CSV plus a human-readable recap of one sweep.
struct SweepOutput {
  std::string csv;      ///< header + one row per sweep point, 6 significant digits
  std::string summary;  ///< solver set, grid, and per-solver consumption ranges
};

/// Evaluate every enabled solver over the sweep grid. Per-point solver
/// failures surface as INFEASIBLE cells, never as exceptions. Rows may be
/// computed in parallel (LEANSLOT_THREADS caps the worker count) but the
/// output is ordered and byte-stable.
[[nodiscard]] SweepOutput run_sweep(const Scenario& sc);

/// Evaluate every enabled solver at a single rate and report each allocation
/// in full (slot counts, powers, consumption).
[[nodiscard]] std::string run_point(const Scenario& sc, double rate);

struct VerifyOutput {
  std::string report;
  double worst_rel_gap;  ///< max over the grid of (solver - oracle) / oracle;
                         ///< gaps within 1e-12 count as an exact match
};

/// Sweep the exact solver against the exhaustive structured oracle and report
/// the worst relative consumption gap on the grid.
[[nodiscard]] VerifyOutput run_verify(const Scenario& sc);

/// Shortest decimal form of x at the given significant digits (used for every
/// CSV number; exposed for byte-determinism tests).
[[nodiscard]] std::string format_significant(double x, int digits);

}  // namespace leanslot
