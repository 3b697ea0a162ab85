#include "backflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "backflow/errors.hpp"
#include "fft.hpp"

namespace backflow {

namespace {

using detail::Fft;
using detail::fft_wavenumber;

constexpr double kAliasBand = 0.9;
constexpr double kEdgeBand = 0.02;

double nyquist(const Grid& grid) { return std::numbers::pi / grid.spacing(); }

void check_aliasing(const std::vector<Complex>& spectrum, const Grid& grid, double tolerance, double t) {
  const double cut = kAliasBand * nyquist(grid);
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double w = std::norm(spectrum[j]);
    total += w;
    if (std::abs(fft_wavenumber(j, spectrum.size(), grid.spacing())) > cut) outer += w;
  }
  if (outer > tolerance * total) {
    throw AliasingError("spectral weight " + std::to_string(outer / total) + " above 90% of Nyquist (" +
                        std::to_string(nyquist(grid)) + " 1/m) at t = " + std::to_string(t) + " s");
  }
}

void check_edges(const std::vector<Complex>& psi, double tolerance, double t) {
  const std::size_t band = std::max<std::size_t>(1, static_cast<std::size_t>(kEdgeBand * psi.size()));
  double peak = 0.0;
  for (const Complex& a : psi) peak = std::max(peak, std::norm(a));
  double edge = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    edge = std::max({edge, std::norm(psi[i]), std::norm(psi[psi.size() - 1 - i])});
  }
  if (edge > tolerance * peak) {
    throw GridEdgeError("density at the grid edge reached " + std::to_string(edge / peak) +
                        " of the peak at t = " + std::to_string(t) + " s");
  }
}

struct StepOperators {
  std::vector<Complex> half_potential;
  std::vector<Complex> kinetic;  // includes the 1/n of the inverse transform
};

StepOperators make_operators(const Grid& grid, const PropagatorConfig& config, double dt) {
  const std::size_t n = grid.n_points();
  StepOperators ops{std::vector<Complex>(n), std::vector<Complex>(n)};
  const double g = config.potential == Potential::linear_gravity ? config.gravity : 0.0;
  const double pot = config.mass * g * dt / (2.0 * constants::hbar);
  const double kin = constants::hbar * dt / (2.0 * config.mass);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    ops.half_potential[i] = std::polar(1.0, -pot * grid.offset(i));
    const double k = fft_wavenumber(i, n, grid.spacing());
    ops.kinetic[i] = std::polar(inv_n, -kin * k * k);
  }
  return ops;
}

std::vector<Complex> spectrum_of(const WaveField& field) {
  std::vector<Complex> s = field.amplitudes;
  Fft fft(s.size());
  fft.forward(s);
  return s;
}

}  // namespace

WaveField kick(const WaveField& field, double signed_k, Complex factor) {
  const std::vector<Complex> spectrum = spectrum_of(field);
  double peak = 0.0;
  for (const Complex& a : spectrum) peak = std::max(peak, std::norm(a));
  double k_occupied = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (std::norm(spectrum[j]) > 1e-12 * peak) {
      k_occupied = std::max(k_occupied, std::abs(fft_wavenumber(j, spectrum.size(), field.grid.spacing()) + signed_k));
    }
  }
  if (k_occupied >= nyquist(field.grid)) {
    throw AliasingError("kick of " + std::to_string(signed_k) + " 1/m pushes occupied wavenumbers to " +
                        std::to_string(k_occupied) + " 1/m, beyond Nyquist " + std::to_string(nyquist(field.grid)));
  }
  WaveField out = field;
  const double base = wrap_phase(Extended::product(signed_k, field.grid.center()));
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    out.amplitudes[i] *= factor * std::polar(1.0, base + signed_k * field.grid.offset(i));
  }
  return out;
}

PropagationResult propagate(const WaveField& initial, const PropagatorConfig& config, double t_final) {
  const Grid& grid = initial.grid;
  const double dt = config.time_step;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("oracle time step must be positive");
  if (!(config.mass > 0.0)) throw DomainError("oracle mass must be positive");
  if (!(t_final >= initial.time)) throw DomainError("oracle cannot propagate backwards in time");
  const double nyquist_phase = constants::hbar * nyquist(grid) * nyquist(grid) * dt / (2.0 * config.mass);
  if (nyquist_phase >= std::numbers::pi / 4.0) {
    throw DomainError("kinetic phase per step at Nyquist is " + std::to_string(nyquist_phase) +
                      " rad; reduce the time step below pi/4 per step");
  }

  const double t0 = initial.time;
  const double total = t_final - t0;
  auto n_full = static_cast<std::size_t>(std::floor(total / dt));
  double remainder = total - static_cast<double>(n_full) * dt;
  if (remainder > dt - config.max_snap) {
    ++n_full;
    remainder = 0.0;
  }
  if (remainder < config.max_snap) remainder = 0.0;

  struct Scheduled {
    std::size_t index;
    const KickEvent* event;
  };
  std::vector<Scheduled> schedule;
  double max_snap = 0.0;
  for (const KickEvent& e : config.kicks) {
    if (!(e.time >= t0 && e.time <= t_final)) {
      throw DomainError("kick at t = " + std::to_string(e.time) + " s lies outside the propagation window");
    }
    const double idx = std::round((e.time - t0) / dt);
    const double snap = std::abs(t0 + idx * dt - e.time);
    if (snap > config.max_snap || idx > static_cast<double>(n_full)) {
      throw DomainError("kick at t = " + std::to_string(e.time) + " s is " + std::to_string(snap) +
                        " s away from the step lattice");
    }
    max_snap = std::max(max_snap, snap);
    schedule.push_back({static_cast<std::size_t>(idx), &e});
  }
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const Scheduled& a, const Scheduled& b) { return a.index < b.index; });

  const double g = config.potential == Potential::linear_gravity ? config.gravity : 0.0;
  // m g x_center per unit time: the part of the potential phase that is uniform on the grid.
  const Extended uniform_rate = Extended::product(config.mass * g, grid.center()) / constants::hbar;

  WaveField field = initial;
  std::vector<Complex>& psi = field.amplitudes;
  Fft fft(psi.size());
  const StepOperators ops = make_operators(grid, config, dt);
  auto step = [&](const StepOperators& op, bool check, double t) {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= op.half_potential[i];
    fft.forward(psi);
    if (check) check_aliasing(psi, grid, config.aliasing_tolerance, t);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= op.kinetic[i];
    fft.backward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= op.half_potential[i];
    if (check) check_edges(psi, config.edge_tolerance, t);
  };

  InternalState state = config.initial_state;
  Extended scalar_phase;
  std::size_t segment_start = 0;
  auto close_segment = [&](std::size_t index) {
    const double energy = state == InternalState::ground ? config.ground_energy : config.excited_energy;
    const Extended elapsed = Extended::product(static_cast<double>(index - segment_start), dt);
    scalar_phase -= elapsed * energy / constants::hbar;
    segment_start = index;
  };

  std::size_t next = 0;
  for (std::size_t s = 0; s <= n_full; ++s) {
    while (next < schedule.size() && schedule[next].index == s) {
      const KickEvent& e = *schedule[next].event;
      close_segment(s);
      field = kick(field, e.signed_k, e.factor);
      state = toggled(state);
      ++next;
    }
    if (s == n_full) break;
    const double t = t0 + static_cast<double>(s + 1) * dt;
    step(ops, (s + 1) % config.check_interval == 0 || s + 1 == n_full, t);
  }
  close_segment(n_full);
  scalar_phase -= uniform_rate * Extended::product(static_cast<double>(n_full), dt);
  if (remainder > 0.0) {
    step(make_operators(grid, config, remainder), true, t_final);
    const double energy = state == InternalState::ground ? config.ground_energy : config.excited_energy;
    scalar_phase -= Extended(remainder) * energy / constants::hbar;
    scalar_phase -= uniform_rate * remainder;
  }
  if (n_full == 0 && remainder == 0.0) check_edges(psi, config.edge_tolerance, t_final);

  const Complex global = std::polar(1.0, wrap_phase(scalar_phase));
  for (Complex& a : psi) a *= global;
  field.time = t_final;
  return PropagationResult{std::move(field), max_snap, n_full + (remainder > 0.0 ? 1 : 0), state};
}

WaveField released_condensate(const Grid& grid, const CondensateParams& params) {
  const double a = params.oscillator_length();
  const double norm = 1.0 / std::sqrt(std::sqrt(std::numbers::pi) * a);
  const double k = params.mass() * params.launch_velocity() / constants::hbar;
  const double shift = grid.center() - params.launch_position();
  WaveField out{grid, std::vector<Complex>(grid.n_points()), 0.0};
  for (std::size_t i = 0; i < grid.n_points(); ++i) {
    const double u = grid.offset(i) + shift;
    out.amplitudes[i] = std::polar(norm * std::exp(-0.5 * u * u / (a * a)), k * u);
  }
  return out;
}

std::vector<KickEvent> pulsed_arm_kicks(const PulseSequence& sequence, const TransitionParams& transition) {
  sequence.validate();
  const double k = transition.wavevector_magnitude();
  std::vector<KickEvent> out;
  int mu = 1;
  out.push_back({sequence.splitting.time, mu * sequence.splitting.wavevector_sign * k, Complex(1.0, 0.0)});
  mu = -mu;
  for (const PulseSpec& p : sequence.lmt) {
    const double s = std::sin(0.5 * p.pulse_area) >= 0.0 ? 1.0 : -1.0;
    const Complex factor = Complex(0.0, -s) * std::polar(1.0, mu * (p.laser_phase - p.rabi_phase_arg));
    out.push_back({p.time, mu * p.wavevector_sign * k, factor});
    mu = -mu;
  }
  return out;
}

PropagatorConfig arm_config(const CondensateParams& params, const Environment& env,
                            const TransitionParams& transition, double time_step, std::vector<KickEvent> kicks) {
  PropagatorConfig c;
  c.time_step = time_step;
  c.mass = params.mass();
  c.potential = env.gravity() > 0.0 ? Potential::linear_gravity : Potential::none;
  c.gravity = env.gravity();
  c.kicks = std::move(kicks);
  c.ground_energy = transition.ground_energy();
  c.excited_energy = transition.excited_energy();
  return c;
}

double mean_position(const WaveField& field) {
  double w = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < field.amplitudes.size(); ++i) {
    const double rho = std::norm(field.amplitudes[i]);
    w += rho;
    s += rho * field.grid.offset(i);
  }
  return field.grid.center() + s / w;
}

double mean_wavenumber(const WaveField& field) {
  const std::vector<Complex> spectrum = spectrum_of(field);
  double w = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double rho = std::norm(spectrum[j]);
    w += rho;
    s += rho * fft_wavenumber(j, spectrum.size(), field.grid.spacing());
  }
  return s / w;
}

double energy(const WaveField& field, double mass, double gravity) {
  const std::vector<Complex> spectrum = spectrum_of(field);
  double w = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const double rho = std::norm(spectrum[j]);
    const double k = fft_wavenumber(j, spectrum.size(), field.grid.spacing());
    w += rho;
    s += rho * k * k;
  }
  const double kinetic = constants::hbar * constants::hbar * (s / w) / (2.0 * mass);
  return kinetic + mass * gravity * mean_position(field);
}

FieldComparison compare_fields(const WaveField& numeric, const WaveField& reference) {
  if (!(numeric.grid == reference.grid)) throw GridMismatchError("compared fields use different grids");
  Complex overlap{0.0, 0.0};
  double peak = 0.0;
  for (std::size_t i = 0; i < numeric.amplitudes.size(); ++i) {
    overlap += std::conj(reference.amplitudes[i]) * numeric.amplitudes[i];
    peak = std::max(peak, std::abs(reference.amplitudes[i]));
  }
  FieldComparison out;
  out.global_phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
  double weight = 0.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < numeric.amplitudes.size(); ++i) {
    const Complex ref = out.global_phase * reference.amplitudes[i];
    out.max_relative_error = std::max(out.max_relative_error, std::abs(numeric.amplitudes[i] - ref));
    const double rho = std::norm(reference.amplitudes[i]);
    const double d = std::arg(numeric.amplitudes[i] * std::conj(ref));
    weight += rho;
    spread += rho * d * d;
  }
  out.max_relative_error /= peak;
  out.phase_spread = std::sqrt(spread / weight);
  return out;
}

}  // namespace backflow
