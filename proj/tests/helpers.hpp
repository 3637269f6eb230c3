#pragma once

#include <cmath>

#include "leanslot/models.hpp"

namespace leanslot::test {

// Relative closeness against a nonzero reference value.
inline bool rel_close(double x, double ref, double tol) {
  return std::abs(x - ref) <= tol * std::abs(ref);
}

inline double rel_gap(double x, double ref) {
  return std::abs(x - ref) / std::abs(ref);
}

// Class B chain used across the suite: 110 W overhead, 20 W cap, 8 dB back-off.
inline ActiveModel reference_model() { return class_b_model(110.0, 20.0); }

// Four-depth sleep table: (entry lead time [s], power [W]).
inline SleepModel table_sleep() {
  SleepModel sm;
  sm.modes = {{0.0, 50.0}, {0.006, 25.0}, {0.05, 1.0}, {1.0, 0.1}};
  return sm;
}

}  // namespace leanslot::test
