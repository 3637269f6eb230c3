#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "leanslot/models.hpp"

using namespace leanslot;
using leanslot::test::reference_model;
using leanslot::test::table_sleep;

namespace {
constexpr double kPsat = 126.19146889603865;  // 20 W plus 8 dB back-off
}

TEST_CASE("supply chain efficiency combines the three loss shares") {
  LossFactors lf;
  CHECK(lf.efficiency() == doctest::Approx(0.757575).epsilon(1e-12));

  LossFactors lossless{0.0, 0.0, 0.0};
  CHECK(lossless.efficiency() == 1.0);
}

TEST_CASE("pa_power per class") {
  SUBCASE("ideal is the identity") {
    PaClass pa = PaClass::ideal(100.0);
    CHECK(pa_power(pa, 0.0) == 0.0);
    CHECK(pa_power(pa, 37.5) == 37.5);
    CHECK(pa_power(pa, 100.0) == 100.0);
  }

  SUBCASE("class A draws a constant 2 p_sat") {
    PaClass pa = PaClass::class_a(kPsat);
    CHECK(pa_power(pa, 0.0) == doctest::Approx(2.0 * kPsat).epsilon(1e-15));
    CHECK(pa_power(pa, 20.0) == doctest::Approx(2.0 * kPsat).epsilon(1e-15));
  }

  SUBCASE("class B square root law") {
    PaClass pa = PaClass::class_b(kPsat);
    CHECK(pa_power(pa, 20.0) == doctest::Approx(63.964662729633804).epsilon(1e-12));
    CHECK(pa_power(pa, 0.0) == 0.0);
    // peak drain efficiency pi/4 at saturation
    CHECK(kPsat / pa_power(pa, kPsat) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
  }

  SUBCASE("envelope tracking is affine and hits eta_max at saturation") {
    double eta = std::numbers::pi / 4.0;
    PaClass pa = PaClass::envelope_tracking(kPsat, eta);
    CHECK(kPsat / pa_power(pa, kPsat) == doctest::Approx(eta).epsilon(1e-12));
    double idle = 0.0082 * kPsat / (1.0082 * eta);
    CHECK(pa_power(pa, 0.0) == doctest::Approx(idle).epsilon(1e-12));
    // affine: midpoint of the endpoints
    double mid = 0.5 * (pa_power(pa, 0.0) + pa_power(pa, kPsat));
    CHECK(pa_power(pa, kPsat / 2.0) == doctest::Approx(mid).epsilon(1e-12));
  }

  SUBCASE("one-way Doherty collapses to class B") {
    PaClass d = PaClass::doherty(kPsat, 1);
    PaClass b = PaClass::class_b(kPsat);
    for (double p : {0.0, 1.0, 5.0, 20.0, 80.0, kPsat})
      CHECK(pa_power(d, p) == doctest::Approx(pa_power(b, p)).epsilon(1e-13));
  }

  SUBCASE("two-way Doherty is continuous at the breakpoint and efficient at the top") {
    PaClass d = PaClass::doherty(kPsat, 2);
    double brk = kPsat / 4.0;  // xi = 1/ell^2
    double below = pa_power(d, brk * (1.0 - 1e-9));
    double at = pa_power(d, brk);
    double above = pa_power(d, brk * (1.0 + 1e-9));
    CHECK(below == doctest::Approx(at).epsilon(1e-7));
    CHECK(above == doctest::Approx(at).epsilon(1e-7));
    CHECK(kPsat / pa_power(d, kPsat) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
  }

  SUBCASE("domain is [0, p_sat]") {
    PaClass pa = PaClass::class_b(kPsat);
    CHECK_THROWS_AS((void)pa_power(pa, -1.0), std::domain_error);
    CHECK_THROWS_AS((void)pa_power(pa, kPsat * 1.0001), std::domain_error);
  }

  SUBCASE("Doherty needs at least one way") {
    CHECK_THROWS_AS(PaClass::doherty(kPsat, 0), std::invalid_argument);
  }
}

TEST_CASE("active model derivation") {
  LossFactors lf;

  SUBCASE("reference class B chain") {
    ActiveModel am = reference_model();
    CHECK(am.p0 == 110.0);
    CHECK(am.alpha == 0.5);
    CHECK(am.p_max == 20.0);
    CHECK(am.gamma == doctest::Approx(18.879890970703684).epsilon(1e-12));
  }

  SUBCASE("from_pa folds the transceiver draw through the supply efficiency") {
    ActiveModel am = active_model_from_pa(PaClass::class_b(kPsat), lf, 83.33325, 20.0);
    CHECK(am.p0 == doctest::Approx(110.0).epsilon(1e-10));
    CHECK(am.gamma == doctest::Approx(reference_model().gamma).epsilon(1e-12));
    CHECK(am.alpha == 0.5);
  }

  SUBCASE("ideal PA gives a linear model") {
    ActiveModel am = active_model_with_p0(PaClass::ideal(kPsat), lf, 110.0, 20.0);
    CHECK(am.alpha == 1.0);
    CHECK(am.gamma == doctest::Approx(1.0 / lf.efficiency()).epsilon(1e-12));
  }

  SUBCASE("class A has no load-dependent term") {
    ActiveModel am = active_model_with_p0(PaClass::class_a(kPsat), lf, 110.0, 20.0);
    CHECK(am.gamma == 0.0);
    CHECK(am.alpha == 1.0);
    ActiveModel from = active_model_from_pa(PaClass::class_a(kPsat), lf, 10.0, 20.0);
    CHECK(from.p0 == doctest::Approx((10.0 + 2.0 * kPsat) / lf.efficiency()).epsilon(1e-12));
  }

  SUBCASE("envelope tracking fit") {
    double eta = std::numbers::pi / 4.0;
    ActiveModel am = active_model_with_p0(PaClass::envelope_tracking(kPsat, eta), lf, 110.0, 20.0);
    CHECK(am.alpha == 1.0);
    CHECK(am.gamma ==
          doctest::Approx(1.0 / (1.0082 * eta) / lf.efficiency()).epsilon(1e-12));
  }

  SUBCASE("multi-way Doherty is rejected") {
    CHECK_THROWS_AS((void)active_model_with_p0(PaClass::doherty(kPsat, 2), lf, 110.0, 20.0),
                    std::invalid_argument);
  }
}

TEST_CASE("sleep_energy on the four-depth table") {
  SleepModel sm = table_sleep();
  sm.validate();

  // hand-computed piecewise integrals
  CHECK(sleep_energy(sm, 0.0) == 0.0);
  CHECK(sleep_energy(sm, -1.0) == 0.0);
  CHECK(sleep_energy(sm, 0.003) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(sleep_energy(sm, 0.006) == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(sleep_energy(sm, 0.03) == doctest::Approx(0.90).epsilon(1e-12));
  CHECK(sleep_energy(sm, 0.05) == doctest::Approx(1.40).epsilon(1e-12));
  CHECK(sleep_energy(sm, 0.2) == doctest::Approx(1.55).epsilon(1e-12));
  CHECK(sleep_energy(sm, 1.0) == doctest::Approx(2.35).epsilon(1e-12));
  CHECK(sleep_energy(sm, 2.0) == doctest::Approx(2.45).epsilon(1e-12));
  CHECK(sleep_energy(sm, 3.0) == doctest::Approx(2.55).epsilon(1e-12));
}

TEST_CASE("sleep_energy is continuous, non-decreasing and concave") {
  SleepModel sm = table_sleep();
  std::vector<double> ts;
  for (int i = 0; i <= 400; ++i) ts.push_back(i * 0.005);  // 0 .. 2 s

  double prev = 0.0;
  double prev_slope = 50.0 + 1e-12;
  for (size_t i = 1; i < ts.size(); ++i) {
    double e = sleep_energy(sm, ts[i]);
    CHECK(e >= prev);
    double slope = (e - prev) / (ts[i] - ts[i - 1]);
    CHECK(slope <= prev_slope + 1e-9);  // concavity: slopes only fall
    CHECK(slope >= 0.1 - 1e-9);         // never below the deepest mode's draw
    prev = e;
    prev_slope = slope;
  }

  for (double brk : {0.006, 0.05, 1.0}) {
    double lo = sleep_energy(sm, brk - 1e-9);
    double hi = sleep_energy(sm, brk + 1e-9);
    CHECK(hi - lo <= 50.0 * 2e-9 + 1e-12);
  }
}

TEST_CASE("sleep model helpers and validation") {
  SleepModel c = SleepModel::constant(7.0);
  CHECK(c.single_mode());
  CHECK(c.initial_power() == 7.0);
  CHECK(sleep_energy(c, 0.4) == doctest::Approx(2.8).epsilon(1e-15));

  SleepModel bad;
  CHECK_THROWS_WITH_AS(bad.validate(), "sleep model: needs at least one mode",
                       std::invalid_argument);

  bad.modes = {{0.1, 50.0}};
  CHECK_THROWS_WITH_AS(bad.validate(), "sleep model: first mode must start at t = 0",
                       std::invalid_argument);

  bad.modes = {{0.0, 50.0}, {0.0, 25.0}};
  CHECK_THROWS_WITH_AS(bad.validate(), "sleep model: mode start times must increase",
                       std::invalid_argument);

  bad.modes = {{0.0, 50.0}, {0.01, 60.0}};
  CHECK_THROWS_WITH_AS(bad.validate(), "sleep model: powers must not increase with depth",
                       std::invalid_argument);

  bad.modes = {{0.0, -1.0}};
  CHECK_THROWS_WITH_AS(bad.validate(),
                       "sleep model: modes need finite start times and powers >= 0",
                       std::invalid_argument);
}

TEST_CASE("achieved_rate and p_cons") {
  ActiveModel am = reference_model();
  LinkParams lp{10, 5.5e-8, 5.0, 0.0};

  Allocation a;
  a.n_active = 2;
  a.powers.assign(10, 0.0);
  a.powers[0] = a.powers[1] = 20.0;
  CHECK(achieved_rate(a, lp) ==
        doctest::Approx(2.0 * std::log2(5.0) / 10.0).epsilon(1e-14));

  SUBCASE("full frame at the cap hits the consumption ceiling") {
    Allocation full;
    full.n_active = 10;
    full.powers.assign(10, 20.0);
    double pc = p_cons(am, SleepModel::constant(50.0), lp, full);
    CHECK(pc == doctest::Approx(194.43343923655586).epsilon(1e-12));
  }

  SUBCASE("an idle frame drains only the sleep schedule") {
    Allocation idle;
    idle.powers.assign(10, 0.0);
    CHECK(p_cons(am, SleepModel::constant(50.0), lp, idle) ==
          doctest::Approx(50.0).epsilon(1e-12));

    LinkParams frame{2000, 1e-4, 0.01, 0.0};
    Allocation none;
    none.powers.assign(2000, 0.0);
    CHECK(p_cons(am, table_sleep(), frame, none) == doctest::Approx(7.75).epsilon(1e-12));
  }
}

TEST_CASE("InfeasibleRate carries the offending numbers") {
  InfeasibleRate err(3.5, 2.25);
  CHECK(err.rate() == 3.5);
  CHECK(err.r_max() == 2.25);
  CHECK(std::string(err.what()).find("exceeds the frame limit") != std::string::npos);
}
