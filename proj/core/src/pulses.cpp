#include "backflow/pulses.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "backflow/errors.hpp"

namespace backflow {

namespace {

constexpr double kMaxPulseArea = 4.0 * std::numbers::pi;
// |cos(A/2)| below this counts as full transfer for an LMT pulse.
constexpr double kFullTransferTolerance = 1e-9;

void validate_pulse(const PulseSpec& pulse, const std::string& path) {
  if (!std::isfinite(pulse.time) || !std::isfinite(pulse.laser_phase) ||
      !std::isfinite(pulse.rabi_phase_arg)) {
    throw ValidationError(path, "time and phases must be finite");
  }
  if (pulse.time < 0.0) {
    throw ValidationError(path + ".time_s", "pulses cannot precede the release at t = 0");
  }
  if (!(pulse.pulse_area >= 0.0 && pulse.pulse_area <= kMaxPulseArea)) {
    throw ValidationError(path + ".pulse_area_rad", "must lie in [0, 4 pi]");
  }
  if (pulse.wavevector_sign != 1 && pulse.wavevector_sign != -1) {
    throw ValidationError(path + ".wavevector_sign", "must be +1 or -1");
  }
}

}  // namespace

void PulseSequence::validate() const {
  validate_pulse(splitting, "splitting_pulse");
  double previous = splitting.time;
  for (std::size_t i = 0; i < lmt.size(); ++i) {
    const std::string path = "lmt_pulses[" + std::to_string(i) + "]";
    validate_pulse(lmt[i], path);
    if (!(lmt[i].time > previous)) {
      throw ValidationError(path + ".time_s", "pulse times must be strictly increasing");
    }
    if (std::abs(std::cos(0.5 * lmt[i].pulse_area)) > kFullTransferTolerance) {
      throw ValidationError(path + ".pulse_area_rad",
                            "pulses on the pulsed arm must transfer the full population (odd multiple of pi)");
    }
    previous = lmt[i].time;
  }
}

Matrix2 transition_matrix(double pulse_area, double rabi_phase_arg, double laser_phase) {
  using namespace std::complex_literals;
  // cos(A/2) written so that it vanishes exactly for a pi pulse.
  const double lc = std::sin(0.5 * (std::numbers::pi - pulse_area));
  const Complex ls = std::polar(std::sin(0.5 * pulse_area), rabi_phase_arg);
  const Complex down = std::polar(1.0, -laser_phase);
  const Complex up = std::polar(1.0, laser_phase);
  return Matrix2{{{Complex(lc), -1.0i * ls * down}, {-1.0i * std::conj(ls) * up, Complex(lc)}}};
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
  }
  return out;
}

Matrix2 adjoint(const Matrix2& m) {
  return Matrix2{{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

ArmAmplitudes split(const ArmAmplitudes& input, const PulseSpec& pulse) {
  const Matrix2 m = transition_matrix(pulse.pulse_area, pulse.rabi_phase_arg, pulse.laser_phase);
  return ArmAmplitudes{m[0][0] * input.c_ground + m[0][1] * input.c_excited,
                       m[1][0] * input.c_ground + m[1][1] * input.c_excited};
}

ArmWeights splitting_weights(const PulseSpec& splitting) {
  const ArmAmplitudes out = split(ArmAmplitudes{}, splitting);
  return ArmWeights{out.c_excited, out.c_ground};
}

ArmWeights real_weights(double cb) {
  if (!(cb >= 0.0 && cb <= 1.0)) {
    throw DomainError("real pulsed-arm weight must lie in [0, 1], got " + std::to_string(cb));
  }
  return ArmWeights{Complex(std::sqrt(std::max(0.0, 1.0 - cb * cb))), Complex(cb)};
}

Complex transfer_amplitude(const PulseSpec& pulse, int mu) {
  const Matrix2 m = transition_matrix(pulse.pulse_area, pulse.rabi_phase_arg, pulse.laser_phase);
  return mu > 0 ? m[1][0] : m[0][1];
}

}  // namespace backflow
