#include <cmath>
#include <numbers>

#include "doctest.h"

#include "backflow/errors.hpp"
#include "backflow/oracle.hpp"
#include "backflow/scenario.hpp"

using namespace backflow;

namespace {

constexpr double kPi = std::numbers::pi;

CondensateParams small_trap(double v0) {
  return CondensateParams(88.0 * constants::atomic_mass_unit, 2.0 * kPi * 1500.0, v0);
}

double second_moment_width(const WaveField& f) {
  const double c = mean_position(f) - f.grid.center();
  double m2 = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < f.grid.n_points(); ++i) {
    const double rho = std::norm(f.amplitudes[i]);
    const double d = f.grid.offset(i) - c;
    m2 += d * d * rho;
    w += rho;
  }
  return std::sqrt(2.0 * m2 / w);
}

PropagatorConfig plain(const CondensateParams& p, double gravity, double dt) {
  return arm_config(p, Environment(gravity), strontium_intercombination_transition(), dt);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("kicks") {
    const CondensateParams p = small_trap(0.0);
    const Grid g(0.0, 20.0 * p.oscillator_length(), 1025);
    const WaveField rest = released_condensate(g, p);

    const WaveField same = kick(rest, 0.0);
    for (std::size_t i = 0; i < g.n_points(); ++i) CHECK(same.amplitudes[i] == Complex(0.0, -1.0) * rest.amplitudes[i]);

    const double k = 3.1e6;
    const WaveField moved = kick(rest, k);
    CHECK(mean_wavenumber(moved) - mean_wavenumber(rest) == doctest::Approx(k).epsilon(1e-9));
    const WaveField back = kick(moved, -k);
    const double peak = std::abs(rest.amplitudes[g.center_index()]);
    for (std::size_t i = 0; i < g.n_points(); ++i) {
      CHECK(std::abs(back.amplitudes[i] + rest.amplitudes[i]) < 1e-15 * peak);
    }

    CHECK_THROWS_AS(kick(rest, kPi / g.spacing()), AliasingError);
  }

  TEST_CASE("free expansion follows the width law") {
    const CondensateParams p = small_trap(0.0);
    const double t = 3e-4;
    const double width = p.oscillator_length() * expansion_rate(t, p.trap_frequency());
    const Grid g(0.0, 14.0 * width, 2049);
    const WaveField start = released_condensate(g, p);
    const PropagationResult r = propagate(start, plain(p, 0.0, 2e-8), t);
    CHECK(r.steps == 15000);
    CHECK(r.field.time == t);
    CHECK(second_moment_width(r.field) == doctest::Approx(width).epsilon(1e-8));
    CHECK(std::abs(r.field.norm() - start.norm()) < 1e-10);

    const WaveField analytic{g, com_wavefunction(g, t, p), t};
    const FieldComparison c = compare_fields(r.field, analytic);
    CHECK(c.max_relative_error < 1e-8);
    CHECK(c.phase_spread < 1e-8);
  }

  TEST_CASE("Ehrenfest motion and energy in gravity") {
    const CondensateParams p = small_trap(0.02);
    const double t = 3e-4;
    const double g = 9.81;
    const double x_end = 0.02 * t - 0.5 * g * t * t;
    const Grid grid(0.5 * x_end, 0.5 * x_end + 14.0 * p.oscillator_length() * expansion_rate(t, p.trap_frequency()),
                    2049);
    const WaveField start = released_condensate(grid, p);
    const PropagationResult r = propagate(start, plain(p, g, 2e-8), t);
    CHECK(std::abs(mean_position(r.field) - x_end) < 1e-9 * p.oscillator_length());
    const double k_end = p.mass() * (0.02 - g * t) / constants::hbar;
    CHECK(mean_wavenumber(r.field) == doctest::Approx(k_end).epsilon(1e-9));
    CHECK(energy(r.field, p.mass(), g) == doctest::Approx(energy(start, p.mass(), g)).epsilon(1e-10));
    CHECK(std::abs(r.field.norm() - start.norm()) < 1e-10);
  }

  TEST_CASE("kick program of the pulsed arm") {
    const ScenarioConfig cfg = preset("reduced-scale");
    const PulseSequence seq = cfg.sequence();
    const TransitionParams tr = cfg.transition();
    const std::vector<KickEvent> kicks = pulsed_arm_kicks(seq, tr);
    REQUIRE(kicks.size() == seq.lmt.size() + 1);
    const double k = tr.wavevector_magnitude();
    CHECK(kicks[0].time == seq.splitting.time);
    CHECK(kicks[0].signed_k == doctest::Approx(-k));
    CHECK(kicks[0].factor == Complex(1.0, 0.0));
    double net = 0.0;
    for (const KickEvent& e : kicks) {
      CHECK(std::abs(std::abs(e.factor) - 1.0) < 1e-15);
      net += e.signed_k;
    }
    // Down twice, then up four times.
    CHECK(net == doctest::Approx(2.0 * k));
  }

  TEST_CASE("configuration errors") {
    const CondensateParams p = small_trap(0.0);
    const Grid g(0.0, 20.0 * p.oscillator_length(), 1025);
    const WaveField start = released_condensate(g, p);
    CHECK_THROWS_AS(propagate(start, plain(p, 0.0, 0.0), 1e-6), DomainError);
    CHECK_THROWS_AS(propagate(start, plain(p, 0.0, 1e-8), -1e-6), DomainError);

    PropagatorConfig off = plain(p, 0.0, 1e-8);
    off.kicks = {KickEvent{1.5e-8 + 1e-10, 1e5, Complex(0.0, -1.0)}};
    CHECK_THROWS_AS(propagate(start, off, 1e-7), DomainError);

    // A step too long for the grid's Nyquist wavenumber.
    CHECK_THROWS_AS(propagate(start, plain(p, 0.0, 1e-5), 1e-4), DomainError);

    // A fast packet on a small periodic box reaches the edge.
    const CondensateParams fast = small_trap(0.05);
    const WaveField launched = released_condensate(g, fast);
    CHECK_THROWS_AS(propagate(launched, plain(fast, 0.0, 1e-8), 2e-4), GridEdgeError);
  }

  TEST_CASE("field comparison removes the global phase") {
    const CondensateParams p = small_trap(0.01);
    const Grid g(0.0, 20.0 * p.oscillator_length(), 513);
    const WaveField a = released_condensate(g, p);
    WaveField b = a;
    for (Complex& z : b.amplitudes) z *= std::polar(1.0, 0.3);
    const FieldComparison c = compare_fields(b, a);
    CHECK(c.max_relative_error < 1e-15);
    CHECK(c.phase_spread < 1e-15);
    CHECK(std::arg(c.global_phase) == doctest::Approx(0.3).epsilon(1e-14));
  }
}
