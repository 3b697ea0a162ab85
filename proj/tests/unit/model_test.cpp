#include <cmath>
#include <numbers>

#include "doctest.h"

#include "backflow/errors.hpp"
#include "backflow/model.hpp"

using namespace backflow;

TEST_SUITE("model") {
  TEST_CASE("oscillator length") {
    CHECK(derive_oscillator_length(constants::hbar, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // 88Sr in a 2 pi x 70 Hz trap, evaluated with mpmath at 40 digits.
    const double m = 88.0 * constants::atomic_mass_unit;
    const double a = derive_oscillator_length(m, 2.0 * std::numbers::pi * 70.0);
    CHECK(a == doctest::Approx(1.2809531364439223e-6).epsilon(1e-14));
    CHECK(strontium88_condensate().oscillator_length() == doctest::Approx(a).epsilon(1e-15));

    CHECK(a / derive_oscillator_length(4.0 * m, 2.0 * std::numbers::pi * 70.0) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK_THROWS_AS(derive_oscillator_length(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(derive_oscillator_length(1.0, -1.0), DomainError);
  }

  TEST_CASE("expansion rate") {
    const double w = 2.0 * std::numbers::pi * 70.0;
    CHECK(expansion_rate(0.0, w) == 1.0);
    CHECK(expansion_rate(1.0 / w, w) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(expansion_rate(4e-3, w) == doctest::Approx(2.0236373045043479).epsilon(1e-14));
    CHECK_THROWS_AS(expansion_rate(-1e-3, w), DomainError);

    CHECK(expansion_rate_derivative(0.0, w) == 0.0);
    const double t = 7e-3;
    const double h = 1e-7;
    const double fd = (expansion_rate(t + h, w) - expansion_rate(t - h, w)) / (2.0 * h);
    CHECK(expansion_rate_derivative(t, w) == doctest::Approx(fd).epsilon(1e-8));
  }

  TEST_CASE("parameter objects") {
    const CondensateParams sr = strontium88_condensate();
    CHECK(sr.launch_velocity() == 0.2);
    CHECK(sr.launch_position() == 0.0);
    CHECK_THROWS_AS(CondensateParams(-1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(CondensateParams(1.0, 0.0, 0.0), DomainError);

    CHECK(Environment().gravity() == 9.81);
    CHECK(Environment(0.0).gravity() == 0.0);
    CHECK_THROWS_AS(Environment(-1.0), DomainError);

    const TransitionParams t = strontium_intercombination_transition();
    CHECK(t.wavelength() == 689e-9);
    CHECK(t.wavevector_magnitude() == doctest::Approx(2.0 * std::numbers::pi / 689e-9).epsilon(1e-15));
    const double photon = 2.0 * std::numbers::pi * constants::hbar * constants::speed_of_light / 689e-9;
    CHECK(t.excited_energy() - t.ground_energy() == doctest::Approx(photon).epsilon(1e-15));
    CHECK_THROWS_AS(TransitionParams(689e-9, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(TransitionParams(0.0, 0.0, 1.0), DomainError);
  }
}
