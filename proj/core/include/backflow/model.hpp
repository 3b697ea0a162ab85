#pragma once

// Physical constants and the parameter objects shared by every stage of the
// pipeline. One spatial dimension, the vertical axis, with up positive.

namespace backflow {

namespace constants {

/// Reduced Planck constant, J s (exact since the 2019 SI redefinition).
inline constexpr double hbar = 1.054571817e-34;
/// Unified atomic mass unit, kg (CODATA 2018: 1.66053906660(50)e-27).
inline constexpr double atomic_mass_unit = 1.66053906660e-27;
/// Speed of light in vacuum, m/s (exact).
inline constexpr double speed_of_light = 299792458.0;
/// Standard gravity used by the reference presets, m/s^2.
inline constexpr double standard_gravity = 9.81;

}  // namespace constants

/// Reference values quoted in reports. Never used in a computation path.
struct ReferenceConstants {
  /// Largest probability that can flow backwards for a free particle with
  /// non-negative momenta.
  static constexpr double bracken_melloy_bound = 0.0384517;
};

/// Trapped condensate released at t = 0 and launched with `launch_velocity`.
class CondensateParams {
 public:
  /// Throws DomainError unless mass > 0 and trap_frequency > 0.
  CondensateParams(double mass, double trap_frequency, double launch_velocity,
                   double launch_position = 0.0);

  double mass() const { return mass_; }
  /// Angular trap frequency along the axis, rad/s.
  double trap_frequency() const { return trap_frequency_; }
  double launch_velocity() const { return launch_velocity_; }
  double launch_position() const { return launch_position_; }
  /// sqrt(hbar / (m * omega)).
  double oscillator_length() const { return oscillator_length_; }

 private:
  double mass_;
  double trap_frequency_;
  double launch_velocity_;
  double launch_position_;
  double oscillator_length_;
};

class Environment {
 public:
  /// `gravity` is the downward magnitude; throws DomainError if negative.
  explicit Environment(double gravity = constants::standard_gravity);

  double gravity() const { return gravity_; }
  double hbar() const { return constants::hbar; }

 private:
  double gravity_;
};

/// Two-level transition addressed by the interferometry pulses.
class TransitionParams {
 public:
  /// Throws DomainError for a non-positive wavelength or excited <= ground.
  TransitionParams(double wavelength, double ground_energy, double excited_energy);

  /// Excited level placed one photon energy 2*pi*hbar*c/wavelength above ground.
  static TransitionParams optical(double wavelength, double ground_energy = 0.0);

  double wavelength() const { return wavelength_; }
  /// 2*pi / wavelength.
  double wavevector_magnitude() const { return wavevector_magnitude_; }
  double ground_energy() const { return ground_energy_; }
  double excited_energy() const { return excited_energy_; }

 private:
  double wavelength_;
  double wavevector_magnitude_;
  double ground_energy_;
  double excited_energy_;
};

/// sqrt(hbar / (mass * trap_frequency)); DomainError on non-positive input.
double derive_oscillator_length(double mass, double trap_frequency);

/// Width growth factor b(t) = sqrt(1 + omega^2 t^2) of the released condensate.
double expansion_rate(double t, double trap_frequency);

/// db/dt = omega^2 t / b(t).
double expansion_rate_derivative(double t, double trap_frequency);

/// 88Sr condensate in a 2*pi x 70 Hz trap launched upward at 0.2 m/s.
CondensateParams strontium88_condensate();
/// The 689 nm 1S0 -> 3P1 intercombination line of strontium.
TransitionParams strontium_intercombination_transition();

}  // namespace backflow
