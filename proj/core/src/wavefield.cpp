#include "backflow/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "backflow/errors.hpp"

namespace backflow {

namespace {

const double kInvPiQuarter = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));

double envelope_value(double u, double width) {
  return kInvPiQuarter / std::sqrt(width) * std::exp(-0.5 * (u * u) / (width * width));
}

Complex com_value(double u, double width, double chirp) {
  return std::polar(envelope_value(u, width), chirp * u * u);
}

double chirp_coefficient(double t, const CondensateParams& params) {
  const double b = expansion_rate(t, params.trap_frequency());
  const double bdot = expansion_rate_derivative(t, params.trap_frequency());
  return params.mass() * bdot / (2.0 * constants::hbar * b);
}

void check_arm(const ArmTrajectory& arm, double t, const CondensateParams& params) {
  if (t < arm.last_event_time()) {
    throw ConsistencyError("encounter time " + std::to_string(t) + " s precedes the last pulse at " +
                           std::to_string(arm.last_event_time()) + " s");
  }
  if (arm.physics().mass != params.mass()) {
    throw ConsistencyError("trajectory was built for a different atomic mass");
  }
}

WaveField arm_field(const Grid& grid, const ArmTrajectory& arm, double t, const CondensateParams& params) {
  if (!(t >= 0.0)) throw DomainError("encounter time must be non-negative");
  check_arm(arm, t, params);
  const double width = params.oscillator_length() * expansion_rate(t, params.trap_frequency());
  const double chirp = chirp_coefficient(t, params);
  const double shift = (Extended(grid.center()) - arm.position_at(t)).value();
  const double k = (arm.velocity_at(t) * params.mass()).value() / constants::hbar;
  const double theta = wrap_phase(arm.phases_at(t).total());

  WaveField out{grid, std::vector<Complex>(grid.n_points()), t};
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const double u = grid.offset(i) + shift;
    out.amplitudes[i] = com_value(u, width, chirp) * std::polar(1.0, theta + k * u);
  }
  return out;
}

}  // namespace

Grid::Grid(double center, double half_width, std::size_t n_points)
    : center_(center), half_width_(half_width), n_points_(n_points), spacing_(0.0) {
  if (!std::isfinite(center)) throw DomainError("grid center must be finite");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("grid half width must be positive");
  if (n_points < 3 || n_points % 2 == 0) {
    throw DomainError("grid needs an odd number of points >= 3, got " + std::to_string(n_points));
  }
  spacing_ = 2.0 * half_width / static_cast<double>(n_points - 1);
}

double WaveField::norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes) s += std::norm(a);
  return s * grid.spacing();
}

std::vector<double> WaveField::density() const {
  std::vector<double> out(amplitudes.size());
  std::transform(amplitudes.begin(), amplitudes.end(), out.begin(), [](const Complex& a) { return std::norm(a); });
  return out;
}

double EncounterGeometry::envelope(double u) const { return envelope_value(u, width); }

Complex EncounterGeometry::com(double u) const { return com_value(u, width, chirp); }

Complex EncounterGeometry::free_arm(double u) const {
  return com(u) * std::polar(1.0, wrap_phase(theta_free) + k_free * u);
}

Complex EncounterGeometry::pulsed_arm(double u) const {
  const double v = u - center_offset;
  return com(v) * std::polar(1.0, wrap_phase(theta_free) + delta_theta + k_pulsed * v);
}

EncounterGeometry encounter_geometry(const CondensateParams& params, const Environment& env,
                                     const ArmTrajectory& free_arm, const ArmTrajectory& pulsed_arm,
                                     double encounter_time) {
  const double t = encounter_time;
  if (!(t >= 0.0)) throw DomainError("encounter time must be non-negative");
  check_arm(free_arm, t, params);
  check_arm(pulsed_arm, t, params);

  EncounterGeometry g;
  g.time = t;
  g.mass = params.mass();
  g.center = free_arm.position_at(t);
  g.center_offset = (pulsed_arm.position_at(t) - g.center).value();
  g.expansion = expansion_rate(t, params.trap_frequency());
  g.width = params.oscillator_length() * g.expansion;
  g.chirp = chirp_coefficient(t, params);
  const double m_over_hbar = params.mass() / constants::hbar;
  g.k_free = free_arm.velocity_at(t).value() * m_over_hbar;
  g.k_pulsed = pulsed_arm.velocity_at(t).value() * m_over_hbar;

  const Segment& last = pulsed_arm.segments().back();
  const Extended closed_form =
      last.start_velocity + Extended::product(env.gravity(), last.start_time) - Extended(params.launch_velocity());
  g.q = closed_form.value() * m_over_hbar;
  const double from_velocities = (pulsed_arm.velocity_at(t) - free_arm.velocity_at(t)).value() * m_over_hbar;
  if (std::abs(g.q - from_velocities) > 1e-9 * std::max(std::abs(g.q), 1.0)) {
    throw ConsistencyError("beat wavenumber disagrees with the arm velocity difference; the free arm must be "
                           "launched at t = 0 with the condensate launch velocity");
  }

  g.theta_free = free_arm.phases_at(t).total();
  g.theta_pulsed = pulsed_arm.phases_at(t).total();
  g.delta_theta = wrap_phase(g.theta_pulsed - g.theta_free);
  return g;
}

EncounterState make_encounter_state(const EncounterGeometry& geometry, const Grid& grid) {
  EncounterState s{grid, geometry, {}, {}, {}};
  const std::size_t n = grid.n_points();
  s.envelope.resize(n);
  s.theta_gradient.resize(n);
  s.com.resize(n);
  const double shift = (Extended(grid.center()) - geometry.center).value();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = grid.offset(i) + shift;
    s.envelope[i] = geometry.envelope(u);
    s.theta_gradient[i] = geometry.grad_theta(u);
    s.com[i] = geometry.com(u);
  }
  return s;
}

Grid auto_grid(const EncounterGeometry& geometry, const GridOptions& options) {
  const double half_width = options.half_width_widths * geometry.width;
  double h = geometry.width / options.envelope_resolution;
  if (geometry.q != 0.0) h = std::min(h, 2.0 * std::numbers::pi / std::abs(geometry.q) / options.fringe_resolution);
  const double k_max =
      std::max(std::abs(geometry.k_free), std::abs(geometry.k_pulsed)) + 2.0 * std::abs(geometry.chirp) * half_width;
  if (k_max > 0.0) h = std::min(h, std::numbers::pi / (options.nyquist_margin * k_max));
  const auto half_points = static_cast<std::size_t>(std::ceil(half_width / h));
  return Grid(geometry.center.value(), half_width, 2 * half_points + 1);
}

Grid auto_grid(const EncounterGeometry& geometry, std::size_t n_points, const GridOptions& options) {
  return Grid(geometry.center.value(), options.half_width_widths * geometry.width, n_points);
}

std::vector<Complex> com_wavefunction(const Grid& grid, double t, const CondensateParams& params) {
  const double width = params.oscillator_length() * expansion_rate(t, params.trap_frequency());
  const double chirp = chirp_coefficient(t, params);
  std::vector<Complex> out(grid.n_points());
  for (std::size_t i = 0; i < grid.n_points(); ++i) out[i] = com_value(grid.offset(i), width, chirp);
  return out;
}

WaveField free_arm_wavefunction(const Grid& grid, double encounter_time, const CondensateParams& params,
                                const Environment& env, const TransitionParams& transition) {
  return arm_field(grid, build_free_arm(params, env, transition), encounter_time, params);
}

WaveField pulsed_arm_wavefunction(const Grid& grid, const ArmTrajectory& trajectory, double encounter_time,
                                  const CondensateParams& params, const Environment& env,
                                  const TransitionParams& transition) {
  const ArmPhysics expected = arm_physics(params, env, transition);
  const ArmPhysics& actual = trajectory.physics();
  if (actual.gravity != expected.gravity || actual.ground_energy != expected.ground_energy ||
      actual.excited_energy != expected.excited_energy) {
    throw ConsistencyError("trajectory was built with a different environment or transition");
  }
  return arm_field(grid, trajectory, encounter_time, params);
}

WaveField combine(const WaveField& free, const WaveField& pulsed, const ArmWeights& weights) {
  if (!(free.grid == pulsed.grid) || free.amplitudes.size() != pulsed.amplitudes.size()) {
    throw GridMismatchError("arm fields are sampled on different grids");
  }
  if (free.time != pulsed.time) throw ConsistencyError("arm fields are evaluated at different times");
  double peak = 0.0;
  double mismatch = 0.0;
  for (std::size_t i = 0; i < free.amplitudes.size(); ++i) {
    const double a = std::abs(free.amplitudes[i]);
    peak = std::max(peak, a);
    mismatch = std::max(mismatch, std::abs(a - std::abs(pulsed.amplitudes[i])));
  }
  if (mismatch > 1e-9 * peak) {
    throw ConsistencyError("arm envelopes differ by " + std::to_string(mismatch / peak) +
                           " of the peak; the arms do not overlap at this time");
  }
  WaveField out{free.grid, std::vector<Complex>(free.amplitudes.size()), free.time};
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    out.amplitudes[i] = weights.free * free.amplitudes[i] + weights.pulsed * pulsed.amplitudes[i];
  }
  return out;
}

WaveField combine_factored(const EncounterState& state, const ArmWeights& weights) {
  const EncounterGeometry& g = state.geometry;
  const double shift = (Extended(state.grid.center()) - g.center).value();
  const double theta_f = wrap_phase(g.theta_free);
  WaveField out{state.grid, std::vector<Complex>(state.grid.n_points()), g.time};
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    const double u = state.grid.offset(i) + shift;
    const Complex psi_f = state.com[i] * std::polar(1.0, theta_f + g.k_free * u);
    out.amplitudes[i] = psi_f * (weights.free + weights.pulsed * std::polar(1.0, g.q * u + g.delta_theta));
  }
  return out;
}

WaveField free_arm_field(const EncounterState& state) {
  WaveField out{state.grid, std::vector<Complex>(state.grid.n_points()), state.geometry.time};
  const double shift = (Extended(state.grid.center()) - state.geometry.center).value();
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    out.amplitudes[i] = state.geometry.free_arm(state.grid.offset(i) + shift);
  }
  return out;
}

WaveField pulsed_arm_field(const EncounterState& state) {
  WaveField out{state.grid, std::vector<Complex>(state.grid.n_points()), state.geometry.time};
  const double shift = (Extended(state.grid.center()) - state.geometry.center).value();
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    out.amplitudes[i] = state.geometry.pulsed_arm(state.grid.offset(i) + shift);
  }
  return out;
}

}  // namespace backflow
