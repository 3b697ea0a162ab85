#include "backflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "backflow/errors.hpp"
#include "io_json.hpp"

namespace backflow {

namespace {

template <class F>
auto as_validation(const std::string& field, F make) {
  try {
    return make();
  } catch (const DomainError& e) {
    throw ValidationError(field, e.what());
  }
}

void require_positive(const char* key, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(key, "must be positive and finite");
}

}  // namespace

CondensateParams ScenarioConfig::condensate() const {
  require_positive("condensate.mass_kg", mass);
  require_positive("condensate.trap_frequency_rad_per_s", trap_frequency);
  return as_validation("condensate",
                       [&] { return CondensateParams(mass, trap_frequency, launch_velocity, launch_position); });
}

Environment ScenarioConfig::environment() const {
  return as_validation("environment.gravity_m_per_s2", [&] { return Environment(gravity); });
}

TransitionParams ScenarioConfig::transition() const {
  require_positive("transition.wavelength_m", wavelength);
  if (excited_energy && !(*excited_energy > ground_energy)) {
    throw ValidationError("transition.excited_energy_J", "must lie above ground_energy_J");
  }
  return as_validation("transition", [&] {
    return excited_energy ? TransitionParams(wavelength, ground_energy, *excited_energy)
                          : TransitionParams::optical(wavelength, ground_energy);
  });
}

PulseSequence ScenarioConfig::sequence() const {
  struct Entry {
    PulseSpec pulse;
    int kick_sign;       // 0 for explicit pulses, whose beam direction is given
    std::string source;  // config path reported in errors
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < lmt_pulses.size(); ++i) {
    entries.push_back({lmt_pulses[i], 0, "lmt_pulses[" + std::to_string(i) + "]"});
  }
  for (std::size_t a = 0; a < lmt_arrays.size(); ++a) {
    const LmtArray& arr = lmt_arrays[a];
    const std::string path = "lmt_arrays[" + std::to_string(a) + "]";
    if (!(arr.interval > 0.0)) throw ValidationError(path + ".interval_s", "must be positive");
    if (!(arr.start >= 0.0)) throw ValidationError(path + ".start_s", "must be non-negative");
    if (arr.kick_sign != 1 && arr.kick_sign != -1) throw ValidationError(path + ".kick_sign", "must be +1 or -1");
    for (std::size_t i = 0; i < arr.count; ++i) {
      PulseSpec p;
      p.time = arr.start + static_cast<double>(i) * arr.interval;
      p.pulse_area = arr.pulse_area;
      p.laser_phase = arr.laser_phase;
      p.rabi_phase_arg = arr.rabi_phase_arg;
      entries.push_back({p, arr.kick_sign, path + " pulse " + std::to_string(i)});
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.pulse.time < b.pulse.time; });

  PulseSequence seq;
  seq.splitting = splitting;
  // The splitting pulse leaves the pulsed arm excited; each later pulse flips it.
  int mu = -1;
  for (Entry& e : entries) {
    if (e.kick_sign != 0) e.pulse.wavevector_sign = e.kick_sign * mu;
    seq.lmt.push_back(e.pulse);
    mu = -mu;
  }
  try {
    seq.validate();
  } catch (const ValidationError& e) {
    // Errors name the merged pulse list; point back at the config entry.
    const std::string& field = e.field();
    const std::string prefix = "lmt_pulses[";
    if (field.rfind(prefix, 0) != 0) throw;
    const std::size_t close = field.find(']');
    const std::size_t i = std::stoul(field.substr(prefix.size(), close - prefix.size()));
    const std::string message = std::string(e.what()).substr(field.size() + 2);
    throw ValidationError(entries[i].source + field.substr(close + 1), message);
  }
  return seq;
}

void ScenarioConfig::validate() const {
  condensate();
  environment();
  transition();
  sequence();
  if (!auto_encounter && !(encounter_delay >= 0.0 && std::isfinite(encounter_delay))) {
    throw ValidationError("encounter.delay_s", "must be non-negative");
  }
  if (grid_points && (*grid_points < 3 || *grid_points % 2 == 0)) {
    throw ValidationError("grid.n_points", "must be odd and at least 3");
  }
  const std::pair<const char*, double> grid_options[] = {{"grid.half_width_widths", grid.half_width_widths},
                                                         {"grid.envelope_resolution", grid.envelope_resolution},
                                                         {"grid.fringe_resolution", grid.fringe_resolution},
                                                         {"grid.nyquist_margin", grid.nyquist_margin}};
  for (const auto& [key, value] : grid_options) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(key, "must be positive");
  }
  if (sweep) sweep->validate();
}

PreparedScenario prepare_scenario(const ScenarioConfig& config) {
  config.validate();
  const CondensateParams params = config.condensate();
  const Environment env = config.environment();
  const TransitionParams transition = config.transition();
  const PulseSequence sequence = config.sequence();

  ArmTrajectory free_arm = build_free_arm(params, env, transition);
  ArmTrajectory pulsed_arm = build_pulsed_arm(params, env, transition, sequence);
  const double last_pulse = std::max(free_arm.last_event_time(), pulsed_arm.last_event_time());
  const double encounter_time = config.auto_encounter ? solve_encounter(free_arm, pulsed_arm, last_pulse)
                                                      : last_pulse + config.encounter_delay;

  const EncounterGeometry geometry = encounter_geometry(params, env, free_arm, pulsed_arm, encounter_time);
  if (std::abs(geometry.center_offset) > 1e-9 * geometry.width) {
    std::ostringstream msg;
    msg << "arm centres are " << geometry.center_offset << " m apart at t = " << encounter_time
        << " s; the combined state needs coincident arms (use the automatic encounter)";
    throw ConsistencyError(msg.str());
  }

  const Grid grid = [&] {
    if (!config.grid_points) return auto_grid(geometry, config.grid);
    Grid g = auto_grid(geometry, *config.grid_points, config.grid);
    if (geometry.q != 0.0 && g.spacing() > 2.0 * std::numbers::pi / std::abs(geometry.q) / 20.0) {
      const Grid needed = auto_grid(geometry, config.grid);
      throw ValidationError("grid.n_points", "spacing " + std::to_string(g.spacing()) +
                                                 " m does not resolve the fringes; need at least " +
                                                 std::to_string(needed.n_points()) + " points");
    }
    return g;
  }();

  EncounterState state = make_encounter_state(geometry, grid);
  const ArmWeights weights = splitting_weights(sequence.splitting);
  return PreparedScenario{config,    params,         env,      transition,       sequence, std::move(free_arm),
                          std::move(pulsed_arm), encounter_time, geometry, std::move(state), weights};
}

ScenarioOutcome run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  PreparedScenario prepared = prepare_scenario(config);
  BackflowReport rep = report(prepared.state, prepared.weights);
  MomentumSpectrum spectrum = momentum_spectrum(prepared.state, prepared.weights);
  std::vector<double> peaks = spectral_peaks(spectrum, 2);
  const ClassicalBackflowCheck classical = classical_backflow_check(prepared.params, prepared.params.launch_velocity());
  ScenarioOutcome out{std::move(prepared), std::move(rep), std::move(spectrum), std::move(peaks), classical, {}, {}};
  out.report_json = detail::report_json(out);

  if (options.out_dir) {
    const std::filesystem::path& dir = *options.out_dir;
    auto emit = [&](const std::string& file, const std::string& contents) {
      write_file_atomic(dir / file, contents);
      out.written.push_back(dir / file);
    };
    emit("report.json", out.report_json);
    if (config.write_profiles) emit("profiles.csv", detail::profiles_csv(out.prepared.state, out.report));
    if (config.write_spectrum) emit("momentum_spectrum.csv", detail::spectrum_csv(out.spectrum));
    if (config.write_wavefield) {
      std::ostringstream bin(std::ios::binary);
      write_binary(bin, combine_factored(out.prepared.state, out.prepared.weights));
      emit("wavefield.bin", bin.str());
    }
  }
  return out;
}

SweepOutcome run_sweep(const ScenarioConfig& config, const RunOptions& options) {
  if (!config.sweep) throw ValidationError("sweep", "configuration has no sweep section");
  PreparedScenario prepared = prepare_scenario(config);
  SweepSpec spec = *config.sweep;
  if (options.threads != 0) spec.threads = options.threads;
  SweepResult result = run_sweep(prepared.state, prepared.sequence.splitting, spec);
  SweepOutcome out{std::move(prepared), spec, std::move(result), {}, {}};
  out.summary_json = detail::sweep_json(out);
  if (options.out_dir) {
    const std::filesystem::path& dir = *options.out_dir;
    write_file_atomic(dir / "sweep.csv", detail::sweep_csv(out.result));
    write_file_atomic(dir / "sweep.json", out.summary_json);
    out.written = {dir / "sweep.csv", dir / "sweep.json"};
  }
  return out;
}

}  // namespace backflow
