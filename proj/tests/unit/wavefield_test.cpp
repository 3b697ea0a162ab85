#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "backflow/errors.hpp"
#include "backflow/scenario.hpp"
#include "backflow/wavefield.hpp"

using namespace backflow;

namespace {

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const Complex& z : v) m = std::max(m, std::abs(z));
  return m;
}

double max_difference(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("wavefield") {
  TEST_CASE("grid") {
    const Grid g(1.5, 2.0, 9);
    CHECK(g.spacing() == 0.5);
    CHECK(g.center_index() == 4);
    CHECK(g.x(0) == -0.5);
    CHECK(g.x(8) == 3.5);
    for (std::size_t i = 0; i < 9; ++i) CHECK(g.offset(i) == -g.offset(8 - i));
    CHECK_THROWS_AS(Grid(0.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(Grid(0.0, 0.0, 11), DomainError);
  }

  TEST_CASE("centre-of-mass wavefunction") {
    const CondensateParams sr = strontium88_condensate();
    const double a = sr.oscillator_length();
    const Grid g0(0.0, 10.0 * a, 801);
    const std::vector<Complex> psi0 = com_wavefunction(g0, 0.0, sr);
    const double n0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi) * a);
    for (std::size_t i = 0; i < g0.n_points(); ++i) {
      const double u = g0.offset(i);
      CHECK(psi0[i].imag() == 0.0);
      CHECK(psi0[i].real() == doctest::Approx(n0 * std::exp(-0.5 * u * u / (a * a))).epsilon(1e-14));
    }

    const double b = expansion_rate(4e-3, sr.trap_frequency());
    const Grid g(0.3, 9.0 * a * b, 2001);
    const WaveField f{g, com_wavefunction(g, 4e-3, sr), 4e-3};
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-6));
    // Second moment of |psi|^2 follows the width a_x b.
    double m2 = 0.0;
    for (std::size_t i = 0; i < g.n_points(); ++i) m2 += g.offset(i) * g.offset(i) * std::norm(f.amplitudes[i]);
    m2 *= g.spacing();
    CHECK(std::sqrt(2.0 * m2) == doctest::Approx(a * b).epsilon(1e-10));
  }

  TEST_CASE("free arm reduces to the centre-of-mass wavefunction") {
    const CondensateParams still(88.0 * constants::atomic_mass_unit, 2.0 * std::numbers::pi * 70.0, 0.0);
    const TransitionParams tr(689e-9, 0.0, 1e-19);
    const Grid g(0.0, 40e-6, 1001);
    const WaveField f = free_arm_wavefunction(g, 5e-3, still, Environment(0.0), tr);
    CHECK(max_difference(f.amplitudes, com_wavefunction(g, 5e-3, still)) < 1e-12 * max_abs(f.amplitudes));

    // Launch velocity and gravity only move the packet and change its phase.
    const CondensateParams sr = strontium88_condensate();
    const Environment env;
    const ArmTrajectory arm = build_free_arm(sr, env, tr);
    const Grid moved(arm.position_at(5e-3).value(), 40e-6, 1001);
    const WaveField h = free_arm_wavefunction(moved, 5e-3, sr, env, tr);
    for (std::size_t i = 0; i < g.n_points(); ++i) {
      CHECK(std::norm(h.amplitudes[i]) == doctest::Approx(std::norm(f.amplitudes[i])).epsilon(1e-10));
    }
  }

  TEST_CASE("arm fields at the encounter") {
    const PreparedScenario p = prepare_scenario(preset("reduced-scale"));
    const EncounterState& s = p.state;
    const WaveField f = free_arm_wavefunction(s.grid, p.encounter_time, p.params, p.env, p.transition);
    const WaveField b = pulsed_arm_wavefunction(s.grid, p.pulsed_arm, p.encounter_time, p.params, p.env, p.transition);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(max_difference(free_arm_field(s).amplitudes, f.amplitudes) < 1e-10 * max_abs(f.amplitudes));
    CHECK(max_difference(pulsed_arm_field(s).amplitudes, b.amplitudes) < 1e-10 * max_abs(b.amplitudes));

    const ArmWeights w = p.weights;
    const WaveField direct = combine(f, b, w);
    const WaveField factored = combine_factored(s, w);
    CHECK(max_difference(direct.amplitudes, factored.amplitudes) < 1e-10 * max_abs(direct.amplitudes));

    const WaveField only_free = combine(f, b, ArmWeights{Complex(0.6, 0.8), 0.0});
    for (std::size_t i = 0; i < f.amplitudes.size(); ++i) {
      CHECK(only_free.amplitudes[i] == Complex(0.6, 0.8) * f.amplitudes[i]);
    }

    // Equal weights give full-contrast fringes at wavelength 2 pi / q.
    const double r = 1.0 / std::sqrt(2.0);
    const WaveField even = combine_factored(s, ArmWeights{r, r});
    const EncounterGeometry& geo = s.geometry;
    const double shift = (Extended(s.grid.center()) - geo.center).value();
    for (std::size_t i = 0; i < s.grid.n_points(); i += 7) {
      const double u = s.grid.offset(i) + shift;
      const double expected = std::pow(geo.envelope(u), 2) * (1.0 + std::cos(geo.q * u + geo.delta_theta));
      CHECK(std::norm(even.amplitudes[i]) == doctest::Approx(expected).epsilon(1e-9).scale(1e3));
    }

    CHECK_THROWS_AS(pulsed_arm_wavefunction(s.grid, p.pulsed_arm, p.pulsed_arm.last_event_time() - 1e-6, p.params,
                                            p.env, p.transition),
                    ConsistencyError);
  }

  TEST_CASE("kick without momentum keeps the density") {
    const CondensateParams sr = strontium88_condensate();
    const Environment env;
    const TransitionParams tr = strontium_intercombination_transition();
    const ArmTrajectory free = build_free_arm(sr, env, tr);
    const ArmTrajectory pulsed = apply_momentum_kick(free, 1e-3, 0.0, Extended(0.4));
    const Grid g(free.position_at(6e-3).value(), 30e-6, 801);
    const WaveField a = free_arm_wavefunction(g, 6e-3, sr, env, tr);
    const WaveField b = pulsed_arm_wavefunction(g, pulsed, 6e-3, sr, env, tr);
    for (std::size_t i = 0; i < g.n_points(); ++i) {
      CHECK(std::norm(b.amplitudes[i]) == doctest::Approx(std::norm(a.amplitudes[i])).epsilon(1e-12));
    }
  }

  TEST_CASE("combination errors") {
    const CondensateParams sr = strontium88_condensate();
    const Environment env;
    const TransitionParams tr = strontium_intercombination_transition();
    const WaveField a = free_arm_wavefunction(Grid(0.0, 30e-6, 101), 6e-3, sr, env, tr);
    const WaveField b = free_arm_wavefunction(Grid(0.0, 30e-6, 103), 6e-3, sr, env, tr);
    CHECK_THROWS_AS(combine(a, b, ArmWeights{}), GridMismatchError);
    WaveField later = a;
    later.time = 7e-3;
    CHECK_THROWS_AS(combine(a, later, ArmWeights{}), ConsistencyError);
  }

  TEST_CASE("serialisation") {
    const PreparedScenario p = prepare_scenario(preset("reduced-scale"));
    const WaveField f = combine_factored(p.state, p.weights);
    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    write_binary(bin, f);
    const WaveField back = read_binary(bin);
    CHECK(back.grid == f.grid);
    CHECK(back.time == f.time);
    CHECK(back.amplitudes == f.amplitudes);

    std::ostringstream csv;
    write_csv(csv, f);
    const std::string text = csv.str();
    CHECK(text.rfind("x,re,im,density\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == f.grid.n_points() + 1);
  }

  TEST_CASE("automatic grid") {
    const PreparedScenario p = prepare_scenario(preset("paper-0.6pi"));
    const EncounterGeometry& geo = p.geometry;
    const Grid g = auto_grid(geo);
    const GridOptions opt;
    CHECK(g.n_points() % 2 == 1);
    CHECK(g.half_width() == doctest::Approx(opt.half_width_widths * geo.width));
    CHECK(g.spacing() <= geo.width / opt.envelope_resolution);
    CHECK(g.spacing() <= 2.0 * std::numbers::pi / geo.q / opt.fringe_resolution);
    const double k_max =
        std::max(std::abs(geo.k_free), std::abs(geo.k_pulsed)) + 2.0 * std::abs(geo.chirp) * g.half_width();
    CHECK(std::numbers::pi / g.spacing() >= opt.nyquist_margin * k_max * (1.0 - 1e-12));
    CHECK(auto_grid(geo, 1001).n_points() == 1001);
  }
}
