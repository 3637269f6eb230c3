#pragma once

#include <stdexcept>
#include <vector>

namespace leanslot {

/// Supply-chain loss shares between the mains and the PA input.
struct LossFactors {
  double sigma_dc = 0.075;   ///< DC-DC conversion
  double sigma_ms = 0.09;    ///< mains supply
  double sigma_cool = 0.10;  ///< active cooling

  /// Combined efficiency (1-sigma_dc)(1-sigma_ms)(1-sigma_cool).
  [[nodiscard]] double efficiency() const;
};

enum class PaKind { Ideal, ClassA, ClassB, EnvelopeTracking, Doherty };

/// Power amplifier described by its class and saturation power.
struct PaClass {
  PaKind kind = PaKind::ClassB;
  double p_sat = 0.0;    ///< saturation output power [W]
  int ways = 1;          ///< branch count, Doherty only
  double eta_max = 0.0;  ///< peak drain efficiency, envelope tracking only

  static PaClass ideal(double p_sat);
  static PaClass class_a(double p_sat);
  static PaClass class_b(double p_sat);
  static PaClass envelope_tracking(double p_sat, double eta_max);
  static PaClass doherty(double p_sat, int ways);
};

/// DC power drawn by the PA while transmitting at power p, 0 <= p <= p_sat.
[[nodiscard]] double pa_power(const PaClass& pa, double p);

/// Consumption model of an active slot: p0 + gamma * p^alpha, with p <= p_max.
struct ActiveModel {
  double p0;     ///< load-independent active power [W]
  double gamma;  ///< load-dependent coefficient (PA slope over supply efficiency)
  double alpha;  ///< PA exponent, in (0, 1]
  double p_max;  ///< per-slot transmit power cap [W]
};

/// Derive (p0, gamma, alpha) from a PA class and the supply losses.
/// p_rf_bb is the RF transceiver + baseband draw; p0 = (p_rf_bb + P_pa0) / efficiency.
/// Multi-way Doherty has no single (gamma, alpha) representation and is rejected.
[[nodiscard]] ActiveModel active_model_from_pa(const PaClass& pa, const LossFactors& lf,
                                               double p_rf_bb, double p_max);

/// Same derivation but with the total load-independent power given directly.
[[nodiscard]] ActiveModel active_model_with_p0(const PaClass& pa, const LossFactors& lf,
                                               double p0, double p_max);

/// Class-B chain with saturation set by back-off above p_max (default 8 dB).
[[nodiscard]] ActiveModel class_b_model(double p0, double p_max, double backoff_db = 8.0,
                                        const LossFactors& lf = {});

/// Piecewise-constant sleep power: mode s draws `power` from `t_start` onward
/// until the next mode begins. Modes are ordered, modes[0].t_start must be 0,
/// and powers must be non-increasing (deeper sleep is never more expensive).
struct SleepModel {
  struct Mode {
    double t_start;  ///< seconds after the transmitter stops
    double power;    ///< watts drawn during this mode

    [[nodiscard]] bool operator==(const Mode&) const = default;
  };
  std::vector<Mode> modes;

  static SleepModel constant(double p_sleep);
  [[nodiscard]] bool single_mode() const { return modes.size() == 1; }
  /// Sleep power at the instant the transmitter stops (shallowest mode).
  [[nodiscard]] double initial_power() const { return modes.front().power; }
  void validate() const;
};

/// Energy drawn while sleeping for duration t. Piecewise linear, concave,
/// non-decreasing; the schedule always advances to deeper modes as t grows.
[[nodiscard]] double sleep_energy(const SleepModel& sm, double t);

struct LinkParams {
  int n_slots;             ///< N, slots per frame
  double symbol_duration;  ///< T [s]
  double sigma2;           ///< normalized noise power [W]
  double rate;             ///< target average rate R [bits/channel use]
};

/// Per-slot transmit powers for one frame. Active slots come first.
struct Allocation {
  int n_active = 0;
  std::vector<double> powers;  ///< length N; zero for n >= n_active
};

/// (1/N) sum log2(1 + p_n / sigma2).
[[nodiscard]] double achieved_rate(const Allocation& a, const LinkParams& lp);

/// Average consumed power of the frame:
/// (N_a/N) p0 + (gamma/N) sum p_n^alpha + E_sleep((N - N_a) T) / (N T).
[[nodiscard]] double p_cons(const ActiveModel& am, const SleepModel& sm,
                            const LinkParams& lp, const Allocation& a);

/// Requested rate exceeds what N slots at p_max can carry.
class InfeasibleRate : public std::domain_error {
 public:
  InfeasibleRate(double rate, double r_max);
  [[nodiscard]] double rate() const { return rate_; }
  [[nodiscard]] double r_max() const { return r_max_; }

 private:
  double rate_;
  double r_max_;
};

}  // namespace leanslot
