#pragma once

// One-parameter sweeps of the splitting: pulse area with matrix weights, or
// real weights injected directly. The encounter geometry does not depend on
// the weights, so every sample reuses one EncounterState.

#include <cstddef>
#include <string>
#include <vector>

#include "backflow/observables.hpp"
#include "backflow/pulses.hpp"
#include "backflow/wavefield.hpp"

namespace backflow {

enum class SweepVariable { pulse_area, real_cb };

std::string to_string(SweepVariable v);
/// Throws ValidationError for anything but "pulse_area" or "real_cb".
SweepVariable parse_sweep_variable(const std::string& name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::pulse_area;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n_samples = 401;
  unsigned threads = 0;  ///< 0 uses every core
  bool refine = true;

  /// n_samples >= 2, lo < hi, range inside [0, 4 pi] or [0, 1].
  void validate() const;
  double value(std::size_t i) const;
};

struct SweepSample {
  double value = 0.0;
  double backflow_rate = 0.0;
  double backflow_fraction = 0.0;
  double rho_crit_max_fraction = 0.0;
  double density_min_fraction = 0.0;
  double max_negative_flux = 0.0;
  std::size_t backflow_interval_count = 0;
};

struct SweepResult {
  SweepVariable variable = SweepVariable::pulse_area;
  std::vector<SweepSample> samples;
  double argmax_value = 0.0;       ///< best sample, ties to the smaller value
  double max_backflow_rate = 0.0;
  double refined_argmax = 0.0;     ///< after local refinement (equals argmax_value when off)
  double refined_max_backflow_rate = 0.0;
};

SweepSample evaluate_sample(const EncounterState& state, const ArmWeights& weights, double value);

/// Weights from the splitting pulse `splitting` with its area replaced by each sample.
SweepResult sweep_pulse_area(const EncounterState& state, const PulseSpec& splitting, const SweepSpec& spec);
/// c_b = value, c_f = sqrt(1 - value^2).
SweepResult sweep_real_weights(const EncounterState& state, const SweepSpec& spec);
/// Dispatch on spec.variable.
SweepResult run_sweep(const EncounterState& state, const PulseSpec& splitting, const SweepSpec& spec);

/// Local maxima of the backflow rate among samples with value in [lo, hi];
/// a flat top counts once, zero-rate samples never count.
std::size_t count_peaks(const SweepResult& result, double lo, double hi);

}  // namespace backflow
