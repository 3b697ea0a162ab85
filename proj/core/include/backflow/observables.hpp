#pragma once

// Probability flux, critical density, backflow rate and momentum spectrum of
// the combined state at the encounter.

#include <cstddef>
#include <vector>

#include "backflow/model.hpp"
#include "backflow/pulses.hpp"
#include "backflow/wavefield.hpp"

namespace backflow {

/// J(x) in 1/s from the closed form
/// (m/hbar) J = grad_theta |psi|^2 + q R^2 |c_b|^2 + q R^2 Re(c_f* c_b e^{i(q u + dtheta)}).
std::vector<double> flux_profile(const EncounterState& state, const ArmWeights& weights);

/// |psi(x)|^2 of the combined state, 1/m.
std::vector<double> density_profile(const EncounterState& state, const ArmWeights& weights);

struct CriticalDensity {
  std::vector<double> values;      ///< 1/m, NaN at singular points
  std::size_t singular_points = 0; ///< samples where q + 2 grad_theta vanishes
};

/// q / (q + 2 grad_theta) R^2 (|c_f|^2 - |c_b|^2).
CriticalDensity critical_density_profile(const EncounterState& state, const ArmWeights& weights);

/// (hbar/m) Im(psi* dpsi/dx) with 4th-order central differences. The two
/// samples at each end have no stencil and are NaN.
std::vector<double> finite_difference_flux(const WaveField& field, double mass);

/// Trapezoidal integral of max(-J, 0) over the grid, m/s.
double backflow_rate(const std::vector<double>& flux, const Grid& grid);

struct BackflowIntegral {
  double rate = 0.0;                ///< m/s, over the whole grid
  double classical_rate = 0.0;      ///< m/s, part of rate where an arm's local velocity is negative (grid estimate)
  std::size_t interval_count = 0;
  double min_flux = 0.0;            ///< most negative J found, 0 if none
  double min_flux_position = 0.0;   ///< x at min_flux, m
};

/// Backflow rate integrated fringe by fringe: the negative lobe of each fringe
/// is bracketed by root finding and integrated by Gauss-Legendre quadrature.
/// J counts as negative below -relative_threshold * max|J|.
BackflowIntegral integrate_backflow(const EncounterState& state, const ArmWeights& weights,
                                    double relative_threshold = 1e-12);

struct MomentumSpectrum {
  std::vector<double> wavenumbers;        ///< ascending, 1/m
  std::vector<double> spectral_density;   ///< |psi(k)|^2, integrates to 1
  double bin_width = 0.0;                 ///< 1/m
  double total_weight = 0.0;              ///< before normalisation
  double negative_weight = 0.0;           ///< weight at k < 0, half of the k = 0 bin
};

/// DFT of the sampled field. AliasingError when any of `arm_wavenumbers`
/// reaches the Nyquist wavenumber pi/spacing.
MomentumSpectrum momentum_spectrum(const WaveField& field, const std::vector<double>& arm_wavenumbers = {});
/// Spectrum of the combined state, guarded against both arm wavenumbers.
MomentumSpectrum momentum_spectrum(const EncounterState& state, const ArmWeights& weights);

/// Wavenumbers of the `count` highest local maxima, in ascending order.
std::vector<double> spectral_peaks(const MomentumSpectrum& spectrum, std::size_t count = 2);

struct ClassicalBackflowCheck {
  double momentum_ratio = 0.0;  ///< m v a_x / hbar
  double size_ratio = 0.0;      ///< a_x omega / v
  bool momentum_ok = false;
  bool size_ok = false;
  bool passed() const { return momentum_ok && size_ok; }
};

struct ClassicalThresholds {
  double min_momentum_ratio = 100.0;
  double max_size_ratio = 0.1;
};

ClassicalBackflowCheck classical_backflow_check(const CondensateParams& params, double velocity,
                                                const ClassicalThresholds& thresholds = {});

struct BackflowReport {
  std::vector<double> flux_profile;
  std::vector<double> density_profile;
  std::vector<double> critical_density_profile;
  double backflow_rate = 0.0;              ///< m/s
  double backflow_rate_grid = 0.0;         ///< trapezoid on the sampled profile, m/s
  double backflow_fraction = 0.0;          ///< backflow_rate / integral of |J|
  double classical_backflow_rate = 0.0;    ///< m/s
  std::size_t backflow_interval_count = 0;
  double max_negative_flux = 0.0;          ///< most negative J, 1/s (0 without backflow)
  double density_max = 0.0;                ///< 1/m
  double rho_crit_max = 0.0;               ///< 1/m
  double rho_crit_max_fraction = 0.0;      ///< rho_crit_max / density_max
  double density_min = 0.0;                ///< local minimum nearest x_c, 1/m
  double density_min_fraction = 0.0;       ///< density_min / density_max, NaN without fringes
  double density_min_position = 0.0;       ///< m
  double fringe_wavelength = 0.0;          ///< 2 pi / |q|, m
  std::size_t singular_points = 0;
};

BackflowReport report(const EncounterState& state, const ArmWeights& weights);

/// Scalar metrics only, without the profiles; what a sweep sample needs.
BackflowReport report_scalars(const EncounterState& state, const ArmWeights& weights);

}  // namespace backflow
