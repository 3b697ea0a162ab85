#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "backflow/errors.hpp"
#include "backflow/observables.hpp"
#include "backflow/scenario.hpp"

using namespace backflow;

namespace {

const PreparedScenario& reduced() {
  static const PreparedScenario p = prepare_scenario(preset("reduced-scale"));
  return p;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double u_at(const EncounterState& s, std::size_t i) {
  return s.grid.offset(i) + (Extended(s.grid.center()) - s.geometry.center).value();
}

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("single arm has no backflow") {
    const EncounterState& s = reduced().state;
    const ArmWeights w{1.0, 0.0};
    const std::vector<double> j = flux_profile(s, w);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (s.geometry.grad_theta(u_at(s, i)) >= 0.0) CHECK(j[i] >= 0.0);
    }
    CHECK(integrate_backflow(s, w).rate == 0.0);
    CHECK(integrate_backflow(s, ArmWeights{0.0, Complex(0.0, 1.0)}).rate == 0.0);

    const BackflowReport r = report(s, w);
    CHECK(r.backflow_rate == 0.0);
    CHECK(r.backflow_interval_count == 0);
    CHECK(r.max_negative_flux == 0.0);
  }

  TEST_CASE("flux matches finite differences") {
    const PreparedScenario& p = reduced();
    const EncounterGeometry& geo = p.geometry;
    // Fine grid so that the fourth-order stencil resolves the fastest arm.
    const double k_max = std::max(std::abs(geo.k_free), std::abs(geo.k_pulsed)) + 2.0 * std::abs(geo.chirp) * 6.0 * geo.width;
    const double h = 2.0 * std::numbers::pi / (150.0 * k_max);
    const auto half = static_cast<std::size_t>(std::ceil(6.0 * geo.width / h));
    const EncounterState s = make_encounter_state(geo, Grid(geo.center.value(), half * h, 2 * half + 1));
    for (const ArmWeights& w : {p.weights, real_weights(0.37), ArmWeights{Complex(0.3, 0.4), Complex(-0.5, 0.7)}}) {
      const std::vector<double> analytic = flux_profile(s, w);
      const std::vector<double> numeric = finite_difference_flux(combine_factored(s, w), geo.mass);
      CHECK(std::isnan(numeric.front()));
      CHECK(std::isnan(numeric[1]));
      CHECK(std::isnan(numeric.back()));
      double err = 0.0;
      for (std::size_t i = 2; i + 2 < numeric.size(); ++i) err = std::max(err, std::abs(numeric[i] - analytic[i]));
      CHECK(err < 1e-6 * max_abs(analytic));
    }
  }

  TEST_CASE("critical density sign rule") {
    const EncounterState& s = reduced().state;
    const double r = 1.0 / std::sqrt(2.0);
    for (double v : critical_density_profile(s, ArmWeights{r, Complex(0.0, r)}).values) {
      if (!std::isnan(v)) CHECK(v == 0.0);
    }

    const ArmWeights heavy_pulsed = real_weights(0.8);
    const CriticalDensity c = critical_density_profile(s, heavy_pulsed);
    const double q = s.geometry.q;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      const double g = s.geometry.grad_theta(u_at(s, i));
      if (q / (q + 2.0 * g) > 0.0) CHECK(c.values[i] < 0.0);
    }
    CHECK(integrate_backflow(s, heavy_pulsed).rate == 0.0);
    CHECK(report(s, heavy_pulsed).backflow_rate == 0.0);
  }

  TEST_CASE("grid backflow rate") {
    const Grid g(0.0, 5e-6, 1001);
    std::vector<double> j(g.n_points(), 3.0);
    CHECK(backflow_rate(j, g) == 0.0);
    for (std::size_t i = 0; i < g.n_points(); ++i) {
      if (std::abs(g.offset(i)) <= 0.5e-6 + 1e-15) j[i] = -1.0;
      else j[i] = 0.0;
    }
    // Rectangle of area 1e-6 m/s up to the trapezoid's half-cell shoulders.
    CHECK(backflow_rate(j, g) == doctest::Approx(1e-6).epsilon(1.1e-2));
  }

  TEST_CASE("integrated rate agrees with the sampled profile") {
    const PreparedScenario& p = reduced();
    const EncounterGeometry& geo = p.geometry;
    const ArmWeights w = real_weights(0.37);
    const BackflowIntegral exact = integrate_backflow(p.state, w);
    REQUIRE(exact.rate > 0.0);
    CHECK(exact.interval_count > 0);
    CHECK(exact.min_flux < 0.0);

    double previous = 1.0;
    for (std::size_t n : {20001u, 80001u}) {
      const EncounterState s = make_encounter_state(geo, auto_grid(geo, n));
      const double grid_rate = backflow_rate(flux_profile(s, w), s.grid);
      const double err = std::abs(grid_rate - exact.rate) / exact.rate;
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 1e-3);

    const std::vector<double> j = flux_profile(p.state, w);
    CHECK(exact.min_flux <= *std::min_element(j.begin(), j.end()) * (1.0 - 1e-12));
  }

  TEST_CASE("momentum spectrum") {
    const CondensateParams still(88.0 * constants::atomic_mass_unit, 2.0 * std::numbers::pi * 70.0, 0.0);
    const double a = still.oscillator_length();
    const Grid g(0.0, 12.0 * a, 1025);
    const WaveField rest{g, com_wavefunction(g, 0.0, still), 0.0};
    const MomentumSpectrum sr = momentum_spectrum(rest);
    CHECK(sr.negative_weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sr.total_weight == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::is_sorted(sr.wavenumbers.begin(), sr.wavenumbers.end()));
    CHECK(spectral_peaks(sr, 1).front() == 0.0);

    // Single arm: one peak at m v / hbar.
    const PreparedScenario& p = reduced();
    const MomentumSpectrum single = momentum_spectrum(free_arm_field(p.state), {p.geometry.k_free});
    const std::vector<double> pk = spectral_peaks(single, 1);
    REQUIRE(pk.size() == 1);
    CHECK(std::abs(pk[0] - p.geometry.k_free) <= single.bin_width);
    CHECK(single.negative_weight < 1e-6);

    const MomentumSpectrum both = momentum_spectrum(p.state, p.weights);
    const std::vector<double> two = spectral_peaks(both, 2);
    REQUIRE(two.size() == 2);
    CHECK(std::abs(two[0] - p.geometry.k_free) <= both.bin_width);
    CHECK(std::abs(two[1] - p.geometry.k_pulsed) <= both.bin_width);

    CHECK_THROWS_AS(momentum_spectrum(rest, {4.0 * std::numbers::pi / g.spacing()}), AliasingError);
  }

  TEST_CASE("classical backflow check") {
    const CondensateParams sr = strontium88_condensate();
    const ClassicalBackflowCheck c = classical_backflow_check(sr, 0.2);
    CHECK(c.momentum_ratio == doctest::Approx(354.99222875269787).epsilon(1e-14));
    CHECK(c.size_ratio == doctest::Approx(0.0028169630741315212).epsilon(1e-14));
    CHECK(c.passed());

    const ClassicalBackflowCheck fast = classical_backflow_check(sr, 2.0);
    CHECK(fast.momentum_ratio == doctest::Approx(10.0 * c.momentum_ratio).epsilon(1e-14));
    CHECK(fast.size_ratio == doctest::Approx(0.1 * c.size_ratio).epsilon(1e-14));

    const ClassicalBackflowCheck none = classical_backflow_check(sr, 0.0);
    CHECK_FALSE(none.momentum_ok);
    CHECK_FALSE(none.size_ok);
  }

  TEST_CASE("report scalars match the full report") {
    const PreparedScenario& p = reduced();
    const BackflowReport full = report(p.state, p.weights);
    const BackflowReport lean = report_scalars(p.state, p.weights);
    CHECK(full.flux_profile.size() == p.state.grid.n_points());
    CHECK(lean.flux_profile.empty());
    CHECK(lean.backflow_rate == full.backflow_rate);
    CHECK(lean.rho_crit_max_fraction == full.rho_crit_max_fraction);
    CHECK(lean.density_min_fraction == full.density_min_fraction);
    CHECK(full.fringe_wavelength == doctest::Approx(2.0 * std::numbers::pi / p.geometry.q));
    CHECK(full.density_min_fraction >= 0.0);
    CHECK(full.density_min_fraction <= 1.0);
    CHECK(full.rho_crit_max <= full.density_max);
  }
}
