#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "backflow/errors.hpp"
#include "backflow/kinematics.hpp"
#include "backflow/scenario.hpp"

using namespace backflow;

namespace {

ArmPhysics strontium(double gravity = 9.81) {
  const TransitionParams t = strontium_intercombination_transition();
  return ArmPhysics{88.0 * constants::atomic_mass_unit, gravity, t.ground_energy(), t.excited_energy()};
}

}  // namespace

TEST_SUITE("kinematics") {
  TEST_CASE("free fall") {
    auto [x0, v0] = free_fall_step(0.0, 0.0, 1.0, 0.0);
    CHECK(x0 == 0.0);
    CHECK(v0 == 0.0);

    auto [x, v] = free_fall_step(0.0, 0.2, 4e-3, 9.81);
    CHECK(x == doctest::Approx(0.00072152).epsilon(1e-14));
    CHECK(v == doctest::Approx(0.16076).epsilon(1e-14));

    auto [xi, vi] = free_fall_step(0.3, -0.1, 0.0, 9.81);
    CHECK(xi == 0.3);
    CHECK(vi == -0.1);
    CHECK_THROWS_AS(free_fall_step(0.0, 0.0, -1.0, 9.81), DomainError);
  }

  TEST_CASE("action phase") {
    const double m = strontium().mass;
    CHECK(action_phase(0.0, 0.0, 3.0, m, 0.0) == 0.0);
    const double p = m * 0.013;
    CHECK(action_phase(p, 0.4, 2e-3, m, 0.0) ==
          doctest::Approx(p * p / (2.0 * m) * 2e-3 / constants::hbar).epsilon(1e-15));

    // Closed form and adaptive quadrature of the Lagrangian agree to all printed digits.
    CHECK(action_phase(m * 0.2, 0.0, 4e-3, m, 9.81) == doctest::Approx(70198.799053964307).epsilon(1e-14));
    const Extended s = action_phase_extended(Extended(m) * 0.2, 0.0, 4e-3, m, 9.81);
    CHECK(s.value() == doctest::Approx(70198.799053964307).epsilon(1e-15));
  }

  TEST_CASE("action additivity") {
    const ArmPhysics ph = strontium();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vel(-0.3, 0.3);
    std::uniform_real_distribution<double> pos(-1e-3, 1e-3);
    std::uniform_real_distribution<double> dur(1e-4, 1e-2);
    for (int i = 0; i < 200; ++i) {
      const Extended v = vel(rng);
      const Extended x = pos(rng);
      const Extended t1 = dur(rng);
      const Extended t2 = dur(rng);
      const Extended p = v * ph.mass;
      const Extended whole = action_phase_extended(p, x, t1 + t2, ph.mass, ph.gravity);
      const Extended x1 = x + v * t1 - Extended(0.5 * ph.gravity) * t1 * t1;
      const Extended p1 = (v - Extended(ph.gravity) * t1) * ph.mass;
      const Extended parts = action_phase_extended(p, x, t1, ph.mass, ph.gravity) +
                             action_phase_extended(p1, x1, t2, ph.mass, ph.gravity);
      CHECK(std::abs((whole - parts).value()) < 1e-12);
    }
  }

  TEST_CASE("trajectory phases accumulate segment by segment") {
    const ArmPhysics ph = strontium();
    const double k = strontium_intercombination_transition().wavevector_magnitude();
    ArmTrajectory arm(ph, 0.0, 0.0, 0.2, InternalState::ground);
    arm = arm.with_kick(1e-3, k).with_kick(3e-3, -k).with_kick(4e-3, k);
    const Extended x = arm.position_at(4.5e-3);
    const Extended p = arm.velocity_at(4.5e-3) * ph.mass;
    const Extended d = arm.phases_at(6e-3).action - arm.phases_at(4.5e-3).action;
    CHECK(std::abs((d - action_phase_extended(p, x, Extended(6e-3) - 4.5e-3, ph.mass, ph.gravity)).value()) < 1e-12);

    CHECK(arm.state_at(0.5e-3) == InternalState::ground);
    CHECK(arm.state_at(2e-3) == InternalState::excited);
    CHECK(arm.state_at(5e-3) == InternalState::excited);
    CHECK(arm.kicks().size() == 3);
    CHECK(arm.kicks()[1].state_before == InternalState::excited);
  }

  TEST_CASE("internal phase") {
    CHECK(internal_phase(0.0, 1.0) == 0.0);
    CHECK(internal_phase(constants::hbar, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    const double e = strontium().excited_energy;
    CHECK(internal_phase(e, 11e-6) == doctest::Approx(-30072811669.662389).epsilon(1e-14));
    CHECK(internal_phase_extended(e, 11e-6).value() == doctest::Approx(-30072811669.662389).epsilon(1e-15));
  }

  TEST_CASE("momentum kicks") {
    const ArmPhysics ph = strontium();
    const double k = strontium_intercombination_transition().wavevector_magnitude();
    const ArmTrajectory arm(ph, 0.0, 0.0, 0.2, InternalState::ground);

    const ArmTrajectory same = apply_momentum_kick(arm, 1e-3, 0.0);
    CHECK(same.velocity_at(2e-3).value() == arm.velocity_at(2e-3).value());
    CHECK(same.state_at(2e-3) == InternalState::excited);

    const ArmTrajectory up = apply_momentum_kick(arm, 1e-3, k);
    const double dv = (up.velocity_at(2e-3) - arm.velocity_at(2e-3)).value();
    CHECK(dv == doctest::Approx(0.0065811992212486091).epsilon(1e-14));

    const ArmTrajectory back = apply_momentum_kick(up, 1.5e-3, -k);
    CHECK((back.velocity_at(2e-3) - arm.velocity_at(2e-3)).value() == 0.0);
    CHECK(back.state_at(2e-3) == InternalState::ground);

    CHECK_THROWS_AS(apply_momentum_kick(up, 0.5e-3, k), OrderingError);
  }

  TEST_CASE("pulse kick direction follows the internal state") {
    const ArmPhysics ph = strontium();
    const double k = strontium_intercombination_transition().wavevector_magnitude();
    const ArmTrajectory arm(ph, 0.0, 0.0, 0.2, InternalState::ground);
    const PulseSpec p{1e-3, std::numbers::pi, 0.3, +1, 0.0};
    const ArmTrajectory a = apply_pulse(arm, p, k);
    CHECK(a.kicks().back().signed_k == doctest::Approx(k));
    const ArmTrajectory b = apply_pulse(a, PulseSpec{2e-3, std::numbers::pi, 0.3, +1, 0.0}, k);
    CHECK(b.kicks().back().signed_k == doctest::Approx(-k));
    CHECK(std::abs(b.velocity_at(3e-3).value() - arm.velocity_at(3e-3).value()) < 1e-15);
  }

  TEST_CASE("encounter solving") {
    const ArmPhysics ph = strontium();
    const ArmTrajectory a(ph, 0.0, 0.0, 0.0, InternalState::ground);
    CHECK(solve_encounter(a, a, 0.25) == 0.25);

    const ArmTrajectory b(ph, 0.0, 1.0, -1.0, InternalState::ground);
    CHECK(solve_encounter(a, b, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

    const ArmTrajectory c(ph, 0.0, 1.0, 1.0, InternalState::ground);
    try {
      solve_encounter(a, c, 0.0);
      FAIL("expected NoEncounterError");
    } catch (const NoEncounterError& e) {
      CHECK(e.min_separation() == doctest::Approx(1.0));
      CHECK(std::string(e.what()).find("separation") != std::string::npos);
    }
  }

  TEST_CASE("reference sequence encounter") {
    const ScenarioConfig cfg = preset("paper-0.6pi");
    const CondensateParams params = cfg.condensate();
    const TransitionParams tr = cfg.transition();
    const PulseSequence seq = cfg.sequence();
    CHECK(seq.lmt.size() == 71);

    const Environment env = cfg.environment();
    const ArmTrajectory f = build_free_arm(params, env, tr);
    const ArmTrajectory p = build_pulsed_arm(params, env, tr, seq);
    const double t = solve_encounter(f, p, p.last_event_time());
    CHECK(t == doctest::Approx(0.020132833333333333).epsilon(1e-14));
    CHECK((p.velocity_at(t) - f.velocity_at(t)).value() == doctest::Approx(0.078974390654983309).epsilon(1e-12));
    CHECK(f.velocity_at(t).value() == doctest::Approx(0.002496905).epsilon(1e-10));

    // Gravity drops out of the relative motion.
    const Environment flat(0.0);
    const double t0 = solve_encounter(build_free_arm(params, flat, tr), build_pulsed_arm(params, flat, tr, seq),
                                      p.last_event_time());
    CHECK(t0 == doctest::Approx(t).epsilon(1e-14));
    const Environment strong(25.0);
    const double t25 = solve_encounter(build_free_arm(params, strong, tr), build_pulsed_arm(params, strong, tr, seq),
                                       p.last_event_time());
    CHECK(t25 == doctest::Approx(t).epsilon(1e-14));
  }
}
