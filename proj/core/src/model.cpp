#include "backflow/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "backflow/errors.hpp"

namespace backflow {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

double derive_oscillator_length(double mass, double trap_frequency) {
  require_positive(mass, "mass");
  require_positive(trap_frequency, "trap_frequency");
  return std::sqrt(constants::hbar / (mass * trap_frequency));
}

double expansion_rate(double t, double trap_frequency) {
  if (!(t >= 0.0)) {
    throw DomainError("expansion_rate: time must be non-negative, got " + std::to_string(t));
  }
  const double wt = trap_frequency * t;
  return std::sqrt(1.0 + wt * wt);
}

double expansion_rate_derivative(double t, double trap_frequency) {
  const double b = expansion_rate(t, trap_frequency);
  return trap_frequency * trap_frequency * t / b;
}

CondensateParams::CondensateParams(double mass, double trap_frequency, double launch_velocity,
                                   double launch_position)
    : mass_(mass),
      trap_frequency_(trap_frequency),
      launch_velocity_(launch_velocity),
      launch_position_(launch_position),
      oscillator_length_(derive_oscillator_length(mass, trap_frequency)) {
  if (!std::isfinite(launch_velocity) || !std::isfinite(launch_position)) {
    throw DomainError("launch velocity and position must be finite");
  }
}

Environment::Environment(double gravity) : gravity_(gravity) {
  if (!(gravity >= 0.0) || !std::isfinite(gravity)) {
    throw DomainError("gravity magnitude must be non-negative, got " + std::to_string(gravity));
  }
}

TransitionParams::TransitionParams(double wavelength, double ground_energy, double excited_energy)
    : wavelength_(wavelength),
      wavevector_magnitude_(0.0),
      ground_energy_(ground_energy),
      excited_energy_(excited_energy) {
  require_positive(wavelength, "wavelength");
  if (!(excited_energy > ground_energy)) {
    throw DomainError("excited_energy must exceed ground_energy");
  }
  wavevector_magnitude_ = 2.0 * std::numbers::pi / wavelength;
}

TransitionParams TransitionParams::optical(double wavelength, double ground_energy) {
  require_positive(wavelength, "wavelength");
  const double photon = 2.0 * std::numbers::pi * constants::hbar * constants::speed_of_light / wavelength;
  return TransitionParams(wavelength, ground_energy, ground_energy + photon);
}

CondensateParams strontium88_condensate() {
  return CondensateParams(88.0 * constants::atomic_mass_unit, 2.0 * std::numbers::pi * 70.0, 0.2);
}

TransitionParams strontium_intercombination_transition() {
  return TransitionParams::optical(689e-9);
}

}  // namespace backflow
