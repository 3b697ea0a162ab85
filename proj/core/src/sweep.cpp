#include "backflow/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "backflow/errors.hpp"
#include "parallel.hpp"

namespace backflow {

namespace {

ArmWeights weights_for(SweepVariable variable, const PulseSpec& splitting, double value) {
  if (variable == SweepVariable::real_cb) return real_weights(value);
  PulseSpec p = splitting;
  p.pulse_area = value;
  return splitting_weights(p);
}

SweepResult sweep(const EncounterState& state, const PulseSpec& splitting, const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.variable = spec.variable;
  result.samples.resize(spec.n_samples);
  detail::parallel_for(spec.n_samples, spec.threads, [&](std::size_t i) {
    const double v = spec.value(i);
    result.samples[i] = evaluate_sample(state, weights_for(spec.variable, splitting, v), v);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.samples.size(); ++i) {
    if (result.samples[i].backflow_rate > result.samples[best].backflow_rate) best = i;
  }
  result.argmax_value = result.samples[best].value;
  result.max_backflow_rate = result.samples[best].backflow_rate;
  result.refined_argmax = result.argmax_value;
  result.refined_max_backflow_rate = result.max_backflow_rate;

  if (spec.refine && result.max_backflow_rate > 0.0) {
    const double step = (spec.hi - spec.lo) / static_cast<double>(spec.n_samples - 1);
    const double a = std::max(spec.lo, result.argmax_value - step);
    const double b = std::min(spec.hi, result.argmax_value + step);
    // Bits such that the bracket shrinks below 1e-4 of the full range.
    const int bits = static_cast<int>(std::ceil(std::log2((b - a) / (1e-4 * (spec.hi - spec.lo))))) + 2;
    boost::uintmax_t iters = 200;
    const auto [x, neg] = boost::math::tools::brent_find_minima(
        [&](double v) { return -evaluate_sample(state, weights_for(spec.variable, splitting, v), v).backflow_rate; },
        a, b, std::clamp(bits, 8, 26), iters);
    if (-neg > result.max_backflow_rate) {
      result.refined_argmax = x;
      result.refined_max_backflow_rate = -neg;
    }
  }
  return result;
}

}  // namespace

std::string to_string(SweepVariable v) { return v == SweepVariable::pulse_area ? "pulse_area" : "real_cb"; }

SweepVariable parse_sweep_variable(const std::string& name) {
  if (name == "pulse_area") return SweepVariable::pulse_area;
  if (name == "real_cb") return SweepVariable::real_cb;
  throw ValidationError("sweep.variable", "expected \"pulse_area\" or \"real_cb\", got \"" + name + "\"");
}

void SweepSpec::validate() const {
  if (n_samples < 2) throw ValidationError("sweep.n_samples", "need at least 2 samples");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("sweep.range", "need lo < hi");
  }
  const double max = variable == SweepVariable::pulse_area ? 4.0 * std::numbers::pi : 1.0;
  // Allow the rounding of a range written as a multiple of pi.
  if (lo < 0.0 || hi > max * (1.0 + 1e-12)) {
    throw ValidationError("sweep.range", variable == SweepVariable::pulse_area ? "must lie within [0, 4 pi]"
                                                                             : "must lie within [0, 1]");
  }
}

double SweepSpec::value(std::size_t i) const {
  if (i + 1 == n_samples) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_samples - 1);
}

SweepSample evaluate_sample(const EncounterState& state, const ArmWeights& weights, double value) {
  const BackflowReport r = report_scalars(state, weights);
  SweepSample s;
  s.value = value;
  s.backflow_rate = r.backflow_rate;
  s.backflow_fraction = r.backflow_fraction;
  s.rho_crit_max_fraction = r.rho_crit_max_fraction;
  s.density_min_fraction = r.density_min_fraction;
  s.max_negative_flux = r.max_negative_flux;
  s.backflow_interval_count = r.backflow_interval_count;
  return s;
}

SweepResult sweep_pulse_area(const EncounterState& state, const PulseSpec& splitting, const SweepSpec& spec) {
  if (spec.variable != SweepVariable::pulse_area) {
    throw ValidationError("sweep.variable", "sweep_pulse_area needs variable pulse_area");
  }
  return sweep(state, splitting, spec);
}

SweepResult sweep_real_weights(const EncounterState& state, const SweepSpec& spec) {
  if (spec.variable != SweepVariable::real_cb) {
    throw ValidationError("sweep.variable", "sweep_real_weights needs variable real_cb");
  }
  return sweep(state, PulseSpec{}, spec);
}

SweepResult run_sweep(const EncounterState& state, const PulseSpec& splitting, const SweepSpec& spec) {
  return sweep(state, splitting, spec);
}

std::size_t count_peaks(const SweepResult& result, double lo, double hi) {
  std::vector<double> rates;
  for (const SweepSample& s : result.samples) {
    if (s.value >= lo && s.value <= hi) rates.push_back(s.backflow_rate);
  }
  std::size_t peaks = 0;
  std::size_t i = 0;
  while (i < rates.size()) {
    std::size_t j = i;
    while (j + 1 < rates.size() && rates[j + 1] == rates[i]) ++j;
    const bool rises = i == 0 || rates[i - 1] < rates[i];
    const bool falls = j + 1 == rates.size() || rates[j + 1] < rates[j];
    if (rates[i] > 0.0 && rises && falls) ++peaks;
    i = j + 1;
  }
  return peaks;
}

}  // namespace backflow
