#pragma once

// Split-step Fourier propagator for H = p^2/2m + m g x with instantaneous
// kicks. Test support only: it validates the closed-form fields and is never
// called from the scenario pipeline.

#include <cstddef>
#include <vector>

#include "backflow/extended.hpp"
#include "backflow/kinematics.hpp"
#include "backflow/model.hpp"
#include "backflow/pulses.hpp"
#include "backflow/wavefield.hpp"

namespace backflow {

enum class Potential { none, linear_gravity };

struct KickEvent {
  double time = 0.0;
  double signed_k = 0.0;        ///< 1/m
  Complex factor{1.0, 0.0};     ///< unit-modulus amplitude multiplying the field
};

struct PropagatorConfig {
  double time_step = 0.0;
  double mass = 0.0;
  Potential potential = Potential::none;
  double gravity = 0.0;
  std::vector<KickEvent> kicks;
  /// Internal-energy phase, applied as a scalar per segment.
  InternalState initial_state = InternalState::ground;
  double ground_energy = 0.0;
  double excited_energy = 0.0;
  /// Kick times must sit this close to a multiple of the step after the start time.
  double max_snap = 1e-12;
  /// Spectral weight beyond 90% of Nyquist that counts as aliasing.
  double aliasing_tolerance = 1e-12;
  /// Edge density relative to the peak that counts as hitting the boundary.
  double edge_tolerance = 1e-12;
  /// Steps between aliasing and edge checks.
  std::size_t check_interval = 256;
};

struct PropagationResult {
  WaveField field;
  double max_snap_distance = 0.0;
  std::size_t steps = 0;
  InternalState final_state = InternalState::ground;
};

/// Strang splitting V/2 T V/2 on the periodic grid of `initial`. Throws
/// DomainError for invalid steps or kick times off the step lattice,
/// AliasingError or GridEdgeError when the packet outgrows the grid.
PropagationResult propagate(const WaveField& initial, const PropagatorConfig& config, double t_final);

/// Multiply by factor * e^{i signed_k x}. AliasingError if the shifted
/// spectrum would reach Nyquist.
WaveField kick(const WaveField& field, double signed_k, Complex factor = Complex(0.0, -1.0));

/// Trapped ground state at release, launched with the condensate velocity.
WaveField released_condensate(const Grid& grid, const CondensateParams& params);

/// Kick program of the pulsed arm, tracking the internal state independently:
/// unit factor for the splitting pulse, matrix-element phase for the others.
std::vector<KickEvent> pulsed_arm_kicks(const PulseSequence& sequence, const TransitionParams& transition);

PropagatorConfig arm_config(const CondensateParams& params, const Environment& env,
                            const TransitionParams& transition, double time_step,
                            std::vector<KickEvent> kicks = {});

double mean_position(const WaveField& field);
/// <p>/hbar from the discrete spectrum, 1/m
double mean_wavenumber(const WaveField& field);
/// <p^2/2m + m g x>, J
double energy(const WaveField& field, double mass, double gravity);

struct FieldComparison {
  double max_relative_error = 0.0;  ///< max |a - g b| / max |b| after removing the global phase g
  double phase_spread = 0.0;        ///< density-weighted rms of arg(a conj(g b)), rad
  Complex global_phase{1.0, 0.0};
};

/// Compare `numeric` against `reference` on the same grid.
FieldComparison compare_fields(const WaveField& numeric, const WaveField& reference);

}  // namespace backflow
