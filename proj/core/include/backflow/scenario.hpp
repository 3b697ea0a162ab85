#pragma once

// Scenario configuration, its JSON form, shipped presets and the end-to-end
// run/sweep drivers used by the command-line tool.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "backflow/kinematics.hpp"
#include "backflow/model.hpp"
#include "backflow/observables.hpp"
#include "backflow/pulses.hpp"
#include "backflow/sweep.hpp"
#include "backflow/wavefield.hpp"

namespace backflow {

/// `count` pulses `interval` apart starting at `start`, each changing the
/// pulsed arm's momentum by kick_sign * hbar k. The beam direction of each
/// pulse follows from the arm's internal state at that pulse.
struct LmtArray {
  std::size_t count = 0;
  double interval = 0.0;
  double start = 0.0;
  int kick_sign = 1;
  double laser_phase = 0.0;
  double pulse_area = 0.0;  ///< defaults to pi when read from JSON
  double rabi_phase_arg = 0.0;

  friend bool operator==(const LmtArray&, const LmtArray&) = default;
};

struct ScenarioConfig {
  std::string name;

  double mass = 0.0;
  double trap_frequency = 0.0;
  double launch_velocity = 0.0;
  double launch_position = 0.0;
  double gravity = constants::standard_gravity;
  double wavelength = 0.0;
  double ground_energy = 0.0;
  std::optional<double> excited_energy;  ///< one photon above ground when absent

  PulseSpec splitting;
  std::vector<PulseSpec> lmt_pulses;
  std::vector<LmtArray> lmt_arrays;

  bool auto_encounter = true;
  double encounter_delay = 0.0;  ///< after the last pulse, when not automatic

  std::optional<std::size_t> grid_points;
  GridOptions grid;

  bool write_profiles = true;
  bool write_spectrum = true;
  bool write_wavefield = false;

  std::optional<SweepSpec> sweep;

  CondensateParams condensate() const;
  Environment environment() const;
  TransitionParams transition() const;
  /// Explicit pulses and expanded arrays merged in time order, validated.
  PulseSequence sequence() const;
  /// Throws ValidationError naming the offending key.
  void validate() const;
};

/// Parse a JSON document. Unknown keys and missing required keys are ValidationErrors.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Fully explicit JSON form; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const ScenarioConfig& config, int indent = 2);

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();
/// Throws ValidationError for an unknown name.
ScenarioConfig preset(const std::string& name);

/// Everything up to the encounter state: trajectories, encounter time, grid.
struct PreparedScenario {
  ScenarioConfig config;
  CondensateParams params;
  Environment env;
  TransitionParams transition;
  PulseSequence sequence;
  ArmTrajectory free_arm;
  ArmTrajectory pulsed_arm;
  double encounter_time;
  EncounterGeometry geometry;
  EncounterState state;
  ArmWeights weights;
};

/// Validate, build the arms, solve (or apply) the encounter and lay out the grid.
PreparedScenario prepare_scenario(const ScenarioConfig& config);

struct ScenarioOutcome {
  PreparedScenario prepared;
  BackflowReport report;
  MomentumSpectrum spectrum;
  std::vector<double> spectrum_peaks;
  ClassicalBackflowCheck classical;
  std::string report_json;
  std::vector<std::filesystem::path> written;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  ///< no files when absent
  unsigned threads = 0;
};

ScenarioOutcome run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct SweepOutcome {
  PreparedScenario prepared;
  SweepSpec spec;
  SweepResult result;
  std::string summary_json;
  std::vector<std::filesystem::path> written;
};

/// Needs config.sweep. Threads from options override spec.threads when non-zero.
SweepOutcome run_sweep(const ScenarioConfig& config, const RunOptions& options = {});

/// Write through a temporary file in the same directory and rename it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace backflow
