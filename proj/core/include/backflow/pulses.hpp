#pragma once

#include <array>
#include <complex>
#include <vector>

namespace backflow {

using Complex = std::complex<double>;
/// Row-major 2x2 complex matrix acting on (ground, excited) amplitudes.
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// One laser pulse in the short-pulse limit.
struct PulseSpec {
  double time = 0.0;             ///< s
  double pulse_area = 0.0;       ///< |Omega| * tau, rad, within [0, 4 pi]
  double laser_phase = 0.0;      ///< phi_L, rad
  int wavevector_sign = +1;      ///< beam direction along the axis, +1 up / -1 down
  double rabi_phase_arg = 0.0;   ///< arg(Omega), rad
};

/// Splitting pulse at the start of the sequence followed by the pulses that
/// only address the pulsed arm.
struct PulseSequence {
  PulseSpec splitting;
  std::vector<PulseSpec> lmt;

  /// Throws ValidationError on out-of-range areas, non-increasing times or
  /// LMT pulses that do not fully transfer population.
  void validate() const;
};

/// Amplitudes of the two internal states of a single momentum class.
struct ArmAmplitudes {
  Complex c_ground{1.0, 0.0};
  Complex c_excited{0.0, 0.0};

  double norm_squared() const { return std::norm(c_ground) + std::norm(c_excited); }
};

/// Weights of the two interferometer arms in the combined state.
struct ArmWeights {
  Complex free{1.0, 0.0};
  Complex pulsed{0.0, 0.0};
};

/// [[cos(A/2), -i s e^{-i phi}], [-i conj(s) e^{i phi}, cos(A/2)]] with
/// s = e^{i rabi_phase_arg} sin(A/2). Unitary for every argument.
Matrix2 transition_matrix(double pulse_area, double rabi_phase_arg, double laser_phase);

Matrix2 multiply(const Matrix2& a, const Matrix2& b);
Matrix2 adjoint(const Matrix2& m);

ArmAmplitudes split(const ArmAmplitudes& input, const PulseSpec& pulse);

/// Arm weights produced by a splitting pulse acting on a ground-state
/// condensate. The arm that keeps the unflipped amplitude, cos(A/2), is the
/// pulsed arm; the transferred amplitude -i sin(A/2) is the free arm. This is
/// the assignment under which the backflow windows open on (pi/2, 3pi/2).
ArmWeights splitting_weights(const PulseSpec& splitting);

/// Real weights with c_pulsed = cb and c_free = +sqrt(1 - cb^2).
ArmWeights real_weights(double cb);

/// Scalar factor a full-transfer pulse applies to an arm in internal state
/// `mu` (+1 ground, -1 excited): the off-diagonal element of the transition
/// matrix that maps that state onto the other one.
Complex transfer_amplitude(const PulseSpec& pulse, int mu);

}  // namespace backflow
