#include "backflow/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "backflow/errors.hpp"

namespace backflow {

namespace {

void require_nonnegative_dt(double dt, const char* what) {
  if (!(dt >= 0.0)) {
    throw DomainError(std::string(what) + ": dt must be non-negative, got " + std::to_string(dt));
  }
}

Extended elapsed(double from, double to) { return Extended::sum(to, -from); }

}  // namespace

ArmTrajectory::ArmTrajectory(const ArmPhysics& physics, double start_time, Extended start_position,
                             Extended start_velocity, InternalState state)
    : physics_(physics) {
  if (!(physics.mass > 0.0)) throw DomainError("ArmTrajectory: mass must be positive");
  if (!std::isfinite(start_time)) throw DomainError("ArmTrajectory: start time must be finite");
  segments_.push_back(Segment{start_time, std::numeric_limits<double>::infinity(), start_position,
                              start_velocity, state});
}

const Segment& ArmTrajectory::segment_at(double t) const {
  if (!(t >= start_time())) {
    throw DomainError("trajectory queried at t = " + std::to_string(t) + " before its start");
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double value, const Segment& s) { return value < s.start_time; });
  return *(it - 1);
}

InternalState ArmTrajectory::state_at(double t) const { return segment_at(t).state; }

Extended ArmTrajectory::position_at(double t) const {
  const Segment& s = segment_at(t);
  const Extended dt = elapsed(s.start_time, t);
  return s.start_position + s.start_velocity * dt - (dt * dt) * (0.5 * physics_.gravity);
}

Extended ArmTrajectory::velocity_at(double t) const {
  const Segment& s = segment_at(t);
  return s.start_velocity - elapsed(s.start_time, t) * physics_.gravity;
}

ArmPhases ArmTrajectory::phases_at(double t) const {
  if (!(t >= start_time())) {
    throw DomainError("trajectory phases queried at t = " + std::to_string(t) + " before its start");
  }
  ArmPhases out;
  for (const Segment& s : segments_) {
    if (s.start_time > t) break;
    const Extended dt = elapsed(s.start_time, std::min(s.end_time, t));
    out.action += action_phase_extended(s.start_velocity * physics_.mass, s.start_position, dt, physics_.mass,
                                        physics_.gravity);
    out.internal += internal_phase_extended(physics_.energy(s.state), dt);
  }
  for (const KickRecord& k : kicks_) {
    if (k.time > t) break;
    out.laser += k.amplitude_phase;
    out.kick += k.position * k.signed_k;
  }
  return out;
}

ArmTrajectory ArmTrajectory::with_kick(double pulse_time, double signed_k, Extended amplitude_phase) const {
  if (!std::isfinite(pulse_time) || !std::isfinite(signed_k)) {
    throw DomainError("kick time and wavevector must be finite");
  }
  if (pulse_time < last_event_time()) {
    throw OrderingError("pulse at t = " + std::to_string(pulse_time) +
                        " s precedes the last event of the trajectory at t = " +
                        std::to_string(last_event_time()) + " s");
  }
  ArmTrajectory out = *this;
  const Extended x = position_at(pulse_time);
  const Extended v = velocity_at(pulse_time) + Extended::product(constants::hbar, signed_k) / physics_.mass;
  const InternalState before = segments_.back().state;
  out.segments_.back().end_time = pulse_time;
  out.segments_.push_back(
      Segment{pulse_time, std::numeric_limits<double>::infinity(), x, v, toggled(before)});
  out.kicks_.push_back(KickRecord{pulse_time, signed_k, x, before, amplitude_phase});
  return out;
}

std::pair<double, double> free_fall_step(double position, double velocity, double dt, double gravity) {
  require_nonnegative_dt(dt, "free_fall_step");
  return {position + velocity * dt - 0.5 * gravity * dt * dt, velocity - gravity * dt};
}

double action_phase(double momentum, double position, double dt, double mass, double gravity) {
  require_nonnegative_dt(dt, "action_phase");
  if (!(mass > 0.0)) throw DomainError("action_phase: mass must be positive");
  const double lagrangian0 = momentum * momentum / (2.0 * mass) - mass * gravity * position;
  return (lagrangian0 * dt - momentum * gravity * dt * dt + mass * gravity * gravity * dt * dt * dt / 3.0) /
         constants::hbar;
}

Extended action_phase_extended(const Extended& momentum, const Extended& position, const Extended& dt,
                               double mass, double gravity) {
  if (!(dt.value() >= 0.0)) throw DomainError("action_phase: dt must be non-negative");
  if (!(mass > 0.0)) throw DomainError("action_phase: mass must be positive");
  const Extended mg = Extended::product(mass, gravity);
  const Extended lagrangian0 = (momentum * momentum) / (2.0 * mass) - position * mg;
  const Extended dt2 = dt * dt;
  const Extended cubic = (mg * gravity) * (dt2 * dt) / 3.0;
  return (lagrangian0 * dt - momentum * gravity * dt2 + cubic) / constants::hbar;
}

double internal_phase(double energy, double dt) {
  require_nonnegative_dt(dt, "internal_phase");
  return -energy * dt / constants::hbar;
}

Extended internal_phase_extended(double energy, const Extended& dt) {
  if (!(dt.value() >= 0.0)) throw DomainError("internal_phase: dt must be non-negative");
  return -(dt * energy) / constants::hbar;
}

ArmTrajectory apply_momentum_kick(const ArmTrajectory& trajectory, double pulse_time, double signed_k,
                                  Extended amplitude_phase) {
  return trajectory.with_kick(pulse_time, signed_k, amplitude_phase);
}

ArmTrajectory apply_pulse(const ArmTrajectory& trajectory, const PulseSpec& pulse, double wavevector_magnitude,
                          bool include_amplitude) {
  const int mu = internal_index(trajectory.segments().back().state);
  const double signed_k = mu * pulse.wavevector_sign * wavevector_magnitude;
  Extended amplitude_phase;
  if (include_amplitude) amplitude_phase = std::arg(transfer_amplitude(pulse, mu));
  return trajectory.with_kick(pulse.time, signed_k, amplitude_phase);
}

double solve_encounter(const ArmTrajectory& free_arm, const ArmTrajectory& pulsed_arm, double after_time) {
  if (!std::isfinite(after_time)) throw DomainError("solve_encounter: after_time must be finite");
  if (free_arm.physics().gravity != pulsed_arm.physics().gravity) {
    throw ConsistencyError("solve_encounter: arms evolve under different gravity");
  }
  // Relative motion is linear between events because gravity cancels.
  std::vector<double> events{after_time};
  for (const ArmTrajectory* arm : {&free_arm, &pulsed_arm}) {
    for (const Segment& s : arm->segments()) {
      if (s.start_time > after_time) events.push_back(s.start_time);
    }
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  double min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double t0 = events[i];
    const double t1 = i + 1 < events.size() ? events[i + 1] : std::numeric_limits<double>::infinity();
    const Extended dx = pulsed_arm.position_at(t0) - free_arm.position_at(t0);
    const Extended dv = pulsed_arm.velocity_at(t0) - free_arm.velocity_at(t0);
    const double sep = std::abs(dx.value());
    if (sep == 0.0) return t0;
    min_separation = std::min(min_separation, sep);
    if (dv.value() == 0.0 || dx.value() * dv.value() > 0.0) continue;
    const Extended tau = -(dx / dv);
    const double t_meet = (Extended(t0) + tau).value();
    if (t_meet <= t1) return t_meet;
  }
  throw NoEncounterError("arms never meet after t = " + std::to_string(after_time) +
                             " s; minimum separation " + std::to_string(min_separation) + " m",
                         min_separation);
}

ArmPhysics arm_physics(const CondensateParams& params, const Environment& env, const TransitionParams& transition) {
  return ArmPhysics{params.mass(), env.gravity(), transition.ground_energy(), transition.excited_energy()};
}

ArmTrajectory build_free_arm(const CondensateParams& params, const Environment& env,
                             const TransitionParams& transition) {
  return ArmTrajectory(arm_physics(params, env, transition), 0.0, params.launch_position(),
                       params.launch_velocity(), InternalState::ground);
}

ArmTrajectory build_pulsed_arm(const CondensateParams& params, const Environment& env,
                               const TransitionParams& transition, const PulseSequence& sequence) {
  sequence.validate();
  const double k = transition.wavevector_magnitude();
  // The splitting amplitude is carried by the arm weights, only its kick lands here.
  ArmTrajectory arm = apply_pulse(build_free_arm(params, env, transition), sequence.splitting, k, false);
  for (const PulseSpec& p : sequence.lmt) arm = apply_pulse(arm, p, k, true);
  return arm;
}

}  // namespace backflow
