#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "backflow/errors.hpp"
#include "backflow/scenario.hpp"
#include "backflow/version.hpp"
#include "io_format.hpp"
#include "io_json.hpp"

namespace backflow {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were used so that typos and
// unit mistakes surface as errors instead of being ignored.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return node_.contains(key); }

  const json& node(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw ValidationError(key_path(key), "missing required number");
    const json& v = node(key);
    if (!v.is_number()) throw ValidationError(key_path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(key_path(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    if (!has(key)) throw ValidationError(key_path(key), "missing required integer");
    const json& v = node(key);
    if (!v.is_number_integer()) throw ValidationError(key_path(key), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node(key);
    if (!v.is_boolean()) throw ValidationError(key_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = node(key);
    if (!v.is_string()) throw ValidationError(key_path(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!used_.count(item.key())) throw ValidationError(key_path(item.key()), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

int sign_value(Reader& r, const std::string& key, int fallback) {
  const long long s = r.integer(key, fallback);
  if (s != 1 && s != -1) throw ValidationError(r.key_path(key), "must be +1 or -1");
  return static_cast<int>(s);
}

PulseSpec read_pulse(const json& node, const std::string& path, double default_area) {
  Reader r(node, path);
  PulseSpec p;
  p.time = r.number("time_s");
  p.pulse_area = r.number("pulse_area_rad", default_area);
  p.laser_phase = r.number("laser_phase_rad", 0.0);
  p.wavevector_sign = sign_value(r, "wavevector_sign", 1);
  p.rabi_phase_arg = r.number("rabi_phase_rad", 0.0);
  r.finish();
  return p;
}

json write_pulse(const PulseSpec& p) {
  return json{{"time_s", p.time},
              {"pulse_area_rad", p.pulse_area},
              {"laser_phase_rad", p.laser_phase},
              {"wavevector_sign", p.wavevector_sign},
              {"rabi_phase_rad", p.rabi_phase_arg}};
}

void read_condensate(Reader& root, ScenarioConfig& c) {
  Reader r(root.node("condensate"), "condensate");
  const std::string preset_name = r.string("preset", "");
  if (!preset_name.empty()) {
    if (preset_name != "sr88") throw ValidationError("condensate.preset", "unknown condensate \"" + preset_name + "\"");
    const CondensateParams sr = strontium88_condensate();
    c.mass = sr.mass();
    c.trap_frequency = sr.trap_frequency();
    c.launch_velocity = sr.launch_velocity();
  }
  if (preset_name.empty()) {
    c.mass = r.number("mass_kg");
    c.trap_frequency = r.number("trap_frequency_rad_per_s");
    c.launch_velocity = r.number("launch_velocity_m_per_s");
  } else {
    c.mass = r.number("mass_kg", c.mass);
    c.trap_frequency = r.number("trap_frequency_rad_per_s", c.trap_frequency);
    c.launch_velocity = r.number("launch_velocity_m_per_s", c.launch_velocity);
  }
  c.launch_position = r.number("launch_position_m", 0.0);
  r.finish();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  Reader root(doc, "");
  ScenarioConfig c;
  c.name = root.string("name", "");

  if (!root.has("condensate")) throw ValidationError("condensate", "missing required section");
  read_condensate(root, c);

  if (root.has("environment")) {
    Reader r(root.node("environment"), "environment");
    c.gravity = r.number("gravity_m_per_s2", constants::standard_gravity);
    r.finish();
  }

  if (!root.has("transition")) throw ValidationError("transition", "missing required section");
  {
    Reader r(root.node("transition"), "transition");
    c.wavelength = r.number("wavelength_m");
    c.ground_energy = r.number("ground_energy_J", 0.0);
    if (r.has("excited_energy_J")) c.excited_energy = r.number("excited_energy_J");
    r.finish();
  }

  if (!root.has("splitting_pulse")) throw ValidationError("splitting_pulse", "missing required section");
  c.splitting = read_pulse(root.node("splitting_pulse"), "splitting_pulse", std::numbers::pi / 2.0);

  if (root.has("lmt_pulses")) {
    const json& list = root.node("lmt_pulses");
    if (!list.is_array()) throw ValidationError("lmt_pulses", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.lmt_pulses.push_back(read_pulse(list[i], "lmt_pulses[" + std::to_string(i) + "]", std::numbers::pi));
    }
  }
  if (root.has("lmt_arrays")) {
    const json& list = root.node("lmt_arrays");
    if (!list.is_array()) throw ValidationError("lmt_arrays", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "lmt_arrays[" + std::to_string(i) + "]";
      Reader r(list[i], path);
      LmtArray a;
      const long long count = r.integer("count");
      if (count < 1) throw ValidationError(path + ".count", "must be at least 1");
      a.count = static_cast<std::size_t>(count);
      a.interval = r.number("interval_s");
      a.start = r.number("start_s");
      a.kick_sign = sign_value(r, "kick_sign", 1);
      a.laser_phase = r.number("laser_phase_rad", 0.0);
      a.pulse_area = r.number("pulse_area_rad", std::numbers::pi);
      a.rabi_phase_arg = r.number("rabi_phase_rad", 0.0);
      r.finish();
      c.lmt_arrays.push_back(a);
    }
  }

  if (root.has("encounter")) {
    Reader r(root.node("encounter"), "encounter");
    const std::string mode = r.string("mode", "auto");
    if (mode == "auto") {
      c.auto_encounter = true;
    } else if (mode == "fixed") {
      c.auto_encounter = false;
      c.encounter_delay = r.number("delay_s");
    } else {
      throw ValidationError("encounter.mode", "expected \"auto\" or \"fixed\"");
    }
    r.finish();
  }

  if (root.has("grid")) {
    Reader r(root.node("grid"), "grid");
    if (r.has("n_points")) {
      const long long n = r.integer("n_points");
      if (n < 3 || n % 2 == 0) throw ValidationError("grid.n_points", "must be odd and at least 3");
      c.grid_points = static_cast<std::size_t>(n);
    }
    c.grid.half_width_widths = r.number("half_width_widths", c.grid.half_width_widths);
    c.grid.envelope_resolution = r.number("envelope_resolution", c.grid.envelope_resolution);
    c.grid.fringe_resolution = r.number("fringe_resolution", c.grid.fringe_resolution);
    c.grid.nyquist_margin = r.number("nyquist_margin", c.grid.nyquist_margin);
    r.finish();
  }

  if (root.has("output")) {
    Reader r(root.node("output"), "output");
    c.write_profiles = r.boolean("profiles", true);
    c.write_spectrum = r.boolean("spectrum", true);
    c.write_wavefield = r.boolean("wavefield_binary", false);
    r.finish();
  }

  if (root.has("sweep")) {
    Reader r(root.node("sweep"), "sweep");
    SweepSpec s;
    s.variable = parse_sweep_variable(r.string("variable", "pulse_area"));
    if (!r.has("range")) throw ValidationError("sweep.range", "missing [lo, hi]");
    const json& range = r.node("range");
    if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
      throw ValidationError("sweep.range", "expected [lo, hi]");
    }
    s.lo = range[0].get<double>();
    s.hi = range[1].get<double>();
    const long long n = r.integer("n_samples", 401);
    if (n < 2) throw ValidationError("sweep.n_samples", "need at least 2 samples");
    s.n_samples = static_cast<std::size_t>(n);
    s.refine = r.boolean("refine", true);
    r.finish();
    s.validate();
    c.sweep = s;
  }
  root.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config", "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ScenarioConfig& c, int indent) {
  json doc;
  doc["name"] = c.name;
  doc["condensate"] = {{"mass_kg", c.mass},
                       {"trap_frequency_rad_per_s", c.trap_frequency},
                       {"launch_velocity_m_per_s", c.launch_velocity},
                       {"launch_position_m", c.launch_position}};
  doc["environment"] = {{"gravity_m_per_s2", c.gravity}};
  doc["transition"] = {{"wavelength_m", c.wavelength}, {"ground_energy_J", c.ground_energy}};
  if (c.excited_energy) doc["transition"]["excited_energy_J"] = *c.excited_energy;
  doc["splitting_pulse"] = write_pulse(c.splitting);
  doc["lmt_pulses"] = json::array();
  for (const PulseSpec& p : c.lmt_pulses) doc["lmt_pulses"].push_back(write_pulse(p));
  doc["lmt_arrays"] = json::array();
  for (const LmtArray& a : c.lmt_arrays) {
    doc["lmt_arrays"].push_back({{"count", a.count},
                                 {"interval_s", a.interval},
                                 {"start_s", a.start},
                                 {"kick_sign", a.kick_sign},
                                 {"laser_phase_rad", a.laser_phase},
                                 {"pulse_area_rad", a.pulse_area},
                                 {"rabi_phase_rad", a.rabi_phase_arg}});
  }
  doc["encounter"] = c.auto_encounter ? json{{"mode", "auto"}} : json{{"mode", "fixed"}, {"delay_s", c.encounter_delay}};
  doc["grid"] = {{"half_width_widths", c.grid.half_width_widths},
                 {"envelope_resolution", c.grid.envelope_resolution},
                 {"fringe_resolution", c.grid.fringe_resolution},
                 {"nyquist_margin", c.grid.nyquist_margin}};
  if (c.grid_points) doc["grid"]["n_points"] = *c.grid_points;
  doc["output"] = {{"profiles", c.write_profiles},
                   {"spectrum", c.write_spectrum},
                   {"wavefield_binary", c.write_wavefield}};
  if (c.sweep) {
    doc["sweep"] = {{"variable", to_string(c.sweep->variable)},
                    {"range", {c.sweep->lo, c.sweep->hi}},
                    {"n_samples", c.sweep->n_samples},
                    {"refine", c.sweep->refine}};
  }
  return doc.dump(indent);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

namespace detail {

namespace {

json provenance(const PreparedScenario& p) {
  const Grid& g = p.state.grid;
  return json{{"version", kVersion},
              {"config", json::parse(config_to_json(p.config, -1))},
              {"grid",
               {{"center_m", g.center()},
                {"half_width_m", g.half_width()},
                {"n_points", g.n_points()},
                {"spacing_m", g.spacing()}}}};
}

json encounter_json(const PreparedScenario& p) {
  const EncounterGeometry& g = p.geometry;
  const double hbar_over_m = constants::hbar / g.mass;
  return json{{"time_s", g.time},
              {"center_m", g.center.value()},
              {"center_offset_m", g.center_offset},
              {"velocity_free_m_per_s", g.k_free * hbar_over_m},
              {"velocity_pulsed_m_per_s", g.k_pulsed * hbar_over_m},
              {"velocity_difference_m_per_s", g.q * hbar_over_m},
              {"q_per_m", g.q},
              {"delta_theta_rad", g.delta_theta},
              {"expansion", g.expansion},
              {"width_m", g.width}};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string report_json(const ScenarioOutcome& o) {
  const BackflowReport& r = o.report;
  json doc;
  doc["report"] = {{"backflow_rate_m_per_s", r.backflow_rate},
                   {"backflow_rate_grid_m_per_s", r.backflow_rate_grid},
                   {"backflow_fraction", r.backflow_fraction},
                   {"classical_backflow_rate_m_per_s", r.classical_backflow_rate},
                   {"backflow_interval_count", r.backflow_interval_count},
                   {"max_negative_flux_per_s", r.max_negative_flux},
                   {"density_max_per_m", r.density_max},
                   {"rho_crit_max_per_m", number_or_null(r.rho_crit_max)},
                   {"rho_crit_max_fraction", number_or_null(r.rho_crit_max_fraction)},
                   {"density_min_per_m", number_or_null(r.density_min)},
                   {"density_min_fraction", number_or_null(r.density_min_fraction)},
                   {"density_min_position_m", number_or_null(r.density_min_position)},
                   {"fringe_wavelength_m", number_or_null(r.fringe_wavelength)},
                   {"singular_points", r.singular_points}};
  doc["encounter"] = encounter_json(o.prepared);
  doc["weights"] = {{"free", complex_json(o.prepared.weights.free)},
                    {"pulsed", complex_json(o.prepared.weights.pulsed)}};
  doc["momentum_spectrum"] = {{"negative_weight", o.spectrum.negative_weight},
                              {"total_weight", o.spectrum.total_weight},
                              {"bin_width_per_m", o.spectrum.bin_width},
                              {"peaks_per_m", o.spectrum_peaks},
                              {"arm_wavenumbers_per_m", {o.prepared.geometry.k_free, o.prepared.geometry.k_pulsed}}};
  doc["classical_check"] = {{"momentum_ratio", o.classical.momentum_ratio},
                            {"size_ratio", number_or_null(o.classical.size_ratio)},
                            {"momentum_ok", o.classical.momentum_ok},
                            {"size_ok", o.classical.size_ok},
                            {"passed", o.classical.passed()}};
  doc["reference"] = {{"bracken_melloy_bound", ReferenceConstants::bracken_melloy_bound}};
  doc["provenance"] = provenance(o.prepared);
  return doc.dump(2) + "\n";
}

std::string sweep_json(const SweepOutcome& o) {
  const SweepResult& r = o.result;
  json doc;
  doc["sweep"] = {{"variable", to_string(r.variable)},
                  {"range", {o.spec.lo, o.spec.hi}},
                  {"n_samples", o.spec.n_samples},
                  {"argmax_value", r.argmax_value},
                  {"max_backflow_rate_m_per_s", r.max_backflow_rate},
                  {"refined_argmax", r.refined_argmax},
                  {"refined_max_backflow_rate_m_per_s", r.refined_max_backflow_rate},
                  {"peak_count", count_peaks(r, o.spec.lo, o.spec.hi)}};
  doc["encounter"] = encounter_json(o.prepared);
  doc["provenance"] = provenance(o.prepared);
  return doc.dump(2) + "\n";
}

std::string profiles_csv(const EncounterState& state, const BackflowReport& report) {
  std::string out = "x,flux,density,rho_crit\n";
  for (std::size_t i = 0; i < state.grid.n_points(); ++i) {
    append_number(out, state.grid.x(i));
    out += ',';
    append_number(out, report.flux_profile[i]);
    out += ',';
    append_number(out, report.density_profile[i]);
    out += ',';
    if (std::isfinite(report.critical_density_profile[i])) append_number(out, report.critical_density_profile[i]);
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const MomentumSpectrum& spectrum) {
  std::string out = "k,density\n";
  for (std::size_t i = 0; i < spectrum.wavenumbers.size(); ++i) {
    append_number(out, spectrum.wavenumbers[i]);
    out += ',';
    append_number(out, spectrum.spectral_density[i]);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "value,backflow_rate,rho_crit_max,density_min,backflow_fraction,max_negative_flux\n";
  for (const SweepSample& s : result.samples) {
    append_number(out, s.value);
    out += ',';
    append_number(out, s.backflow_rate);
    out += ',';
    if (std::isfinite(s.rho_crit_max_fraction)) append_number(out, s.rho_crit_max_fraction);
    out += ',';
    if (std::isfinite(s.density_min_fraction)) append_number(out, s.density_min_fraction);
    out += ',';
    append_number(out, s.backflow_fraction);
    out += ',';
    append_number(out, s.max_negative_flux);
    out += '\n';
  }
  return out;
}

}  // namespace detail

}  // namespace backflow
