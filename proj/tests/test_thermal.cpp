#include <doctest.h>

#include <cmath>

#include "cabinrl/rng.hpp"
#include "cabinrl/thermal.hpp"

using namespace cabinrl;

TEST_CASE("derived capacitances from defaults") {
  ModelParams p;
  CHECK(p.cabin_capacitance() == doctest::Approx(3015.0));
  CHECK(p.effective_cabin_capacitance() == doctest::Approx(24120.0));
  CHECK(p.mass_capacitance == doctest::Approx(70650.0));
  CHECK(p.mass_conductance == doctest::Approx(81.0));
  CHECK(p.cabin_conductance == doctest::Approx(22.966507176));
  p.validate();
}

TEST_CASE("flow_to_conductance") {
  ModelParams p;
  CHECK(flow_to_conductance(0.0, p) == 0.0);
  CHECK(flow_to_conductance(100.0, p) == doctest::Approx(120.6));
  CHECK(flow_to_conductance(1.0, p) == doctest::Approx(1.206));
  CHECK_THROWS_AS(flow_to_conductance(-1.0, p), std::invalid_argument);
  // monotone in flow
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(0.0, 100.0);
    const double b = a + rng.uniform(0.0, 50.0);
    CHECK(flow_to_conductance(a, p) <= flow_to_conductance(b, p));
  }
}

TEST_CASE("action grid decode/encode") {
  const HvacAction a0 = decode_action(0);
  CHECK(a0.vent_flow == 1.0);
  CHECK(a0.vent_temp == 7.0);
  CHECK(a0.recirc == 0.0);
  const HvacAction a59 = decode_action(59);
  CHECK(a59.vent_flow == 100.0);
  CHECK(a59.vent_temp == 60.0);
  CHECK(a59.recirc == 1.0);
  const HvacAction a17 = decode_action(17);
  CHECK(a17.vent_flow == 34.0);
  CHECK(a17.vent_temp == 7.0);
  CHECK(a17.recirc == 1.0);
  for (int i = 0; i < kActionCount; ++i) CHECK(action_index(decode_action(i)) == i);
  CHECK_THROWS_AS(decode_action(60), std::out_of_range);
  CHECK_THROWS_AS(decode_action(-1), std::out_of_range);
  // vent temps are 5 evenly spaced values over [7, 60]
  for (int i = 0; i < 5; ++i) {
    CHECK(kVentTemps[static_cast<size_t>(i)] ==
          doctest::Approx(7.0 + i * (60.0 - 7.0) / 4.0));
  }
}

TEST_CASE("heat_pump_demand hand cases") {
  ModelParams p;
  SUBCASE("all temperatures equal -> zero power") {
    for (double ar : kRecircPositions) {
      const PumpDemand d = heat_pump_demand({20, 15, 20}, {100, 20, ar}, p);
      CHECK(d.q_h_w == doctest::Approx(0.0));
    }
  }
  SUBCASE("full recirculation") {
    const PumpDemand d = heat_pump_demand({20, 15, 0}, {100, 40, 1.0}, p);
    CHECK(d.q_h_w == doctest::Approx(2412.0));
    CHECK(d.i_fan == doctest::Approx(120.6));
    CHECK(d.i_in == doctest::Approx(0.0));
  }
  SUBCASE("full fresh air") {
    const PumpDemand d = heat_pump_demand({20, 15, 0}, {100, 40, 0.0}, p);
    CHECK(d.q_h_w == doctest::Approx(4824.0));
    CHECK(d.i_in == doctest::Approx(120.6));
  }
  SUBCASE("with full recirc, pump power has the sign of T_i - T_c") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
      const CabinState s{rng.uniform(-5, 65), rng.uniform(-5, 65), rng.uniform(0, 40)};
      const HvacAction a{kVentFlows[static_cast<size_t>(rng.uniform_int(4))],
                         rng.uniform(7, 60), 1.0};
      const PumpDemand d = heat_pump_demand(s, a, p);
      if (a.vent_temp > s.t_cabin) CHECK(d.q_h_w > 0.0);
      if (a.vent_temp < s.t_cabin) CHECK(d.q_h_w < 0.0);
    }
  }
}

TEST_CASE("derivatives hand cases") {
  ModelParams p;
  SUBCASE("equilibrium with zero loads") {
    ModelParams z = p;
    z.solar_load_w = 0.0;
    z.occupant_load_w = 0.0;
    const CabinDerivatives d = derivatives({20, 20, 20}, 20.0, 0.0, z);
    CHECK(d.d_t_cabin == doctest::Approx(0.0));
    CHECK(d.d_t_mass == doctest::Approx(0.0));
  }
  SUBCASE("loads only") {
    const CabinDerivatives d = derivatives({20, 20, 20}, 20.0, 0.0, p);
    CHECK(d.d_t_cabin == doctest::Approx(270.0 / 24120.0));
    CHECK(d.d_t_cabin == doctest::Approx(0.011194).epsilon(1e-4));
    CHECK(d.d_t_mass == doctest::Approx(0.0));
  }
  SUBCASE("mass node relaxation") {
    ModelParams z = p;
    z.solar_load_w = 0.0;
    z.occupant_load_w = 0.0;
    const CabinDerivatives d = derivatives({20, 30, 20}, 20.0, 0.0, z);
    CHECK(d.d_t_mass == doctest::Approx((20.0 - 30.0) * 81.0 / 70650.0));
    CHECK(d.d_t_mass == doctest::Approx(-0.011465).epsilon(1e-4));
  }
  SUBCASE("dT_c/dt is non-decreasing in vent temperature") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
      const CabinState s{rng.uniform(-5, 65), rng.uniform(-5, 65), rng.uniform(0, 40)};
      const double ifan = flow_to_conductance(rng.uniform(1, 100), p);
      const double t1 = rng.uniform(7, 60);
      const double t2 = t1 + rng.uniform(0, 20);
      CHECK(derivatives(s, t1, ifan, p).d_t_cabin <= derivatives(s, t2, ifan, p).d_t_cabin);
    }
  }
}

TEST_CASE("step hand cases") {
  ModelParams p;
  SUBCASE("strict equilibrium is a fixed point") {
    ModelParams z = p;
    z.solar_load_w = 0.0;
    z.occupant_load_w = 0.0;
    const StepOutcome o = step({20, 20, 20}, {1, 20, 1.0}, z);
    CHECK(o.next.t_cabin == doctest::Approx(20.0));
    CHECK(o.next.t_mass == doctest::Approx(20.0));
    CHECK(o.next.t_ambient == 20.0);
  }
  SUBCASE("one Euler step with loads") {
    const StepOutcome o = step({20, 20, 20}, {1, 20, 1.0}, p);
    CHECK(o.next.t_cabin == doctest::Approx(20.0 + 2.0 * 270.0 / 24120.0));
    CHECK(o.next.t_cabin == doctest::Approx(20.0224).epsilon(1e-4));
    CHECK(o.next.t_mass == doctest::Approx(20.0));
    CHECK(o.heat_pump_power_w == doctest::Approx(0.0));
  }
  SUBCASE("Richardson: halved substep agrees within 0.01 K") {
    Rng rng(7);
    ModelParams half = p;
    half.substeps = 2;
    for (int i = 0; i < 200; ++i) {
      const CabinState s{rng.uniform(-5, 65), rng.uniform(-5, 65), rng.uniform(0, 40)};
      const HvacAction a = decode_action(rng.uniform_int(kActionCount));
      const StepOutcome o1 = step(s, a, p);
      const StepOutcome o2 = step(s, a, half);
      CHECK(std::abs(o1.next.t_cabin - o2.next.t_cabin) < 0.01);
      CHECK(std::abs(o1.next.t_mass - o2.next.t_mass) < 0.01);
    }
  }
}

TEST_CASE("analytic fixed point of the fan-minimum rollout") {
  // With the fan at the minimum flow and the vent set-point pinned near the
  // cabin temperature the cabin settles where the constant loads balance the
  // conduction to ambient: T_c - T_amb = 270 / 22.966507176.
  ModelParams p;
  const double expected_gap = (p.solar_load_w + p.occupant_load_w) / p.cabin_conductance;
  CHECK(expected_gap == doctest::Approx(11.756).epsilon(1e-4));

  CabinState s{20, 20, 20};
  // Fan current of 1 l/s at a mid-grid vent temperature is a small
  // perturbation; the rollout must still land within 0.5 K of the analytic
  // I_fan = 0 fixed point.
  // The interior mass makes the slow mode ~80 min, so run a day of sim time.
  const HvacAction a{1.0, 33.5, 1.0};
  for (int i = 0; i < 50000; ++i) s = step(s, a, p).next;
  CHECK(std::abs((s.t_cabin - s.t_ambient) - expected_gap) < 0.5);
  CHECK(std::abs(s.t_mass - s.t_cabin) < 0.5);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.substeps = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.mass_capacitance = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
