#include <cmath>
#include <numbers>

#include "backflow/errors.hpp"
#include "backflow/scenario.hpp"

namespace backflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPulseSpacing = 11e-6;

ScenarioConfig strontium_base(const std::string& name, double splitting_area) {
  const CondensateParams sr = strontium88_condensate();
  ScenarioConfig c;
  c.name = name;
  c.mass = sr.mass();
  c.trap_frequency = sr.trap_frequency();
  c.launch_velocity = sr.launch_velocity();
  c.gravity = constants::standard_gravity;
  c.wavelength = strontium_intercombination_transition().wavelength();
  c.splitting = PulseSpec{0.0, splitting_area, 0.0, -1, 0.0};
  return c;
}

// Split downwards, one LMT pulse, 4 ms of flight, 28 more pulses down, a gap
// and 42 pulses up. The net +12 recoils make the arms close at 0.079 m/s; the
// gap sets the free arm to about 2.5 mm/s upwards when they meet.
ScenarioConfig reference(const std::string& name, double splitting_area) {
  ScenarioConfig c = strontium_base(name, splitting_area);
  const double first = kPulseSpacing;
  const double array_a = first + 4e-3;
  const double array_a_end = array_a + 27 * kPulseSpacing;
  const double array_b = array_a_end + 3.992e-3;
  c.lmt_arrays = {LmtArray{1, kPulseSpacing, first, -1, 0.0, kPi, 0.0},
                  LmtArray{28, kPulseSpacing, array_a, -1, 0.0, kPi, 0.0},
                  LmtArray{42, kPulseSpacing, array_b, 1, 0.0, kPi, 0.0}};
  return c;
}

// Stiffer trap, slower launch and a short sequence so that the split-step
// oracle can follow both arms on a few thousand grid points. Pulse times are
// multiples of 11 us / 200.
ScenarioConfig reduced_scale() {
  ScenarioConfig c = strontium_base("reduced-scale", 0.6 * kPi);
  c.trap_frequency = 2.0 * kPi * 1500.0;
  c.launch_velocity = 0.02;
  c.excited_energy = constants::hbar * 2.0 * kPi * 50e3;
  c.lmt_arrays = {LmtArray{1, kPulseSpacing, kPulseSpacing, -1, 0.0, kPi, 0.0},
                  LmtArray{4, kPulseSpacing, 45 * kPulseSpacing, 1, 0.0, kPi, 0.0}};
  return c;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  return {{"paper-0.6pi", "88Sr reference sequence, splitting area 0.6 pi"},
          {"paper-0.75pi", "88Sr reference sequence, splitting area 0.75 pi"},
          {"paper-fig8a", "reference sequence, splitting area swept over [0, 4 pi]"},
          {"paper-fig8b", "reference sequence, real pulsed-arm weight swept over [0, 1]"},
          {"reduced-scale", "small, fast sequence in a 2 pi x 1.5 kHz trap for oracle comparisons"}};
}

ScenarioConfig preset(const std::string& name) {
  if (name == "paper-0.6pi") return reference(name, 0.6 * kPi);
  if (name == "paper-0.75pi") return reference(name, 0.75 * kPi);
  if (name == "paper-fig8a") {
    ScenarioConfig c = reference(name, 0.6 * kPi);
    c.write_profiles = false;
    c.sweep = SweepSpec{SweepVariable::pulse_area, 0.0, 4.0 * kPi, 401, 0, true};
    return c;
  }
  if (name == "paper-fig8b") {
    ScenarioConfig c = reference(name, 0.6 * kPi);
    c.write_profiles = false;
    c.sweep = SweepSpec{SweepVariable::real_cb, 0.0, 1.0, 401, 0, true};
    return c;
  }
  if (name == "reduced-scale") return reduced_scale();
  throw ValidationError("--preset", "unknown preset \"" + name + "\"");
}

}  // namespace backflow
