#pragma once

// Classical centre-of-mass motion of each interferometer arm and the scalar
// phases it accumulates: free-fall action between pulses, internal-energy
// evolution, pulse amplitude phases and the position-dependent kick phase.

#include <limits>
#include <utility>
#include <vector>

#include "backflow/extended.hpp"
#include "backflow/model.hpp"
#include "backflow/pulses.hpp"

namespace backflow {

enum class InternalState { ground, excited };

/// +1 for ground, -1 for excited.
constexpr int internal_index(InternalState s) { return s == InternalState::ground ? 1 : -1; }
constexpr InternalState toggled(InternalState s) {
  return s == InternalState::ground ? InternalState::excited : InternalState::ground;
}

/// Everything the phase bookkeeping needs to know about the atom and its surroundings.
struct ArmPhysics {
  double mass = 0.0;
  double gravity = 0.0;
  double ground_energy = 0.0;
  double excited_energy = 0.0;

  double energy(InternalState s) const { return s == InternalState::ground ? ground_energy : excited_energy; }
};

/// Ballistic stretch between two pulses.
struct Segment {
  double start_time = 0.0;
  double end_time = std::numeric_limits<double>::infinity();  ///< open for the last segment
  Extended start_position;
  Extended start_velocity;
  InternalState state = InternalState::ground;
};

struct KickRecord {
  double time = 0.0;
  double signed_k = 0.0;          ///< transferred wavevector, 1/m
  Extended position;              ///< COM position at the kick
  InternalState state_before = InternalState::ground;
  Extended amplitude_phase;       ///< arg of the pulse factor (-i e^{i mu phi_L} for a pi pulse)
};

/// Unwrapped phases accumulated along an arm, rad.
struct ArmPhases {
  Extended action;
  Extended laser;
  Extended internal;
  Extended kick;

  Extended total() const { return action + laser + internal + kick; }
};

class ArmTrajectory {
 public:
  ArmTrajectory(const ArmPhysics& physics, double start_time, Extended start_position,
                Extended start_velocity, InternalState state);

  const ArmPhysics& physics() const { return physics_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<KickRecord>& kicks() const { return kicks_; }
  double start_time() const { return segments_.front().start_time; }
  /// Start of the final (open) segment: the last pulse, or the launch.
  double last_event_time() const { return segments_.back().start_time; }

  InternalState state_at(double t) const;
  Extended position_at(double t) const;
  Extended velocity_at(double t) const;
  /// Phases accumulated from the start of the trajectory up to and including time t.
  ArmPhases phases_at(double t) const;

  /// Append an instantaneous kick at `pulse_time`. The new segment starts with
  /// v + hbar*signed_k/m and the toggled internal state; the kick phase
  /// signed_k * x_c and `amplitude_phase` join the accumulators. Throws
  /// OrderingError when pulse_time precedes the current last segment.
  ArmTrajectory with_kick(double pulse_time, double signed_k, Extended amplitude_phase = {}) const;

 private:
  const Segment& segment_at(double t) const;

  ArmPhysics physics_;
  std::vector<Segment> segments_;
  std::vector<KickRecord> kicks_;
};

/// x' = x + v dt - g dt^2/2, v' = v - g dt. DomainError for dt < 0.
std::pair<double, double> free_fall_step(double position, double velocity, double dt, double gravity);

/// Free-fall action between pulses divided by hbar:
/// [(P^2/2m - m g x) dt - P g dt^2 + m g^2 dt^3 / 3] / hbar.
double action_phase(double momentum, double position, double dt, double mass, double gravity);
Extended action_phase_extended(const Extended& momentum, const Extended& position, const Extended& dt,
                               double mass, double gravity);

/// -E dt / hbar.
double internal_phase(double energy, double dt);
Extended internal_phase_extended(double energy, const Extended& dt);

/// Functional form of ArmTrajectory::with_kick.
ArmTrajectory apply_momentum_kick(const ArmTrajectory& trajectory, double pulse_time, double signed_k,
                                  Extended amplitude_phase = {});

/// Apply a full-transfer pulse: the arm in state mu receives mu * sign * k and,
/// when `include_amplitude`, the phase of the matching transition-matrix element.
ArmTrajectory apply_pulse(const ArmTrajectory& trajectory, const PulseSpec& pulse,
                          double wavevector_magnitude, bool include_amplitude = true);

/// Earliest time >= after_time at which the two COM positions coincide.
/// Gravity cancels in the relative coordinate so the relative motion after
/// the last pulse is linear. Throws NoEncounterError (with the minimum future
/// separation) when the arms are parallel or diverging.
double solve_encounter(const ArmTrajectory& free_arm, const ArmTrajectory& pulsed_arm, double after_time);

ArmPhysics arm_physics(const CondensateParams& params, const Environment& env, const TransitionParams& transition);

/// Ground-state arm launched at t = 0 that never sees a laser pulse.
ArmTrajectory build_free_arm(const CondensateParams& params, const Environment& env,
                             const TransitionParams& transition);

/// Arm kicked by the splitting pulse (amplitude carried by the arm weights)
/// and then by every LMT pulse of the sequence.
ArmTrajectory build_pulsed_arm(const CondensateParams& params, const Environment& env,
                               const TransitionParams& transition, const PulseSequence& sequence);

}  // namespace backflow
