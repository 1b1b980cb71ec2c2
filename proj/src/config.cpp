#include "spqg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace spqg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error("config: " + key + " = '" + text + "' is not a number");
  }
  if (trim(text.substr(used)).size() != 0) throw Error("config: " + key + " = '" + text + "' is not a number");
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
  ConfigFile cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(origin + ":" + std::to_string(number) + ": empty key");
    if (cfg.values_.count(key)) throw Error(origin + ":" + std::to_string(number) + ": duplicate key " + key);
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path.string());
  return parse(in, path.string());
}

std::string ConfigFile::require(const std::string& key) const {
  used_[key] = true;
  return values_.at(key);
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? require(key) : fallback;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, require(key)) : fallback;
}

long ConfigFile::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = to_double(key, require(key));
  if (v != static_cast<double>(static_cast<long>(v))) throw Error("config: " + key + " must be an integer");
  return static_cast<long>(v);
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = require(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw Error("config: " + key + " = '" + v + "' is not a boolean");
}

std::vector<double> ConfigFile::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(require(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::vector<std::string> ConfigFile::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) out.push_back(key);
  return out;
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Qg2dConvergence:
      return "qg2d_convergence";
    case ExperimentKind::FastwaveDecay:
      return "fastwave_decay";
    case ExperimentKind::Dispersion3d:
      return "dispersion3d";
    case ExperimentKind::StrichartzProbe:
      return "strichartz_probe";
    case ExperimentKind::SingleRun:
      return "single_run";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::Qg2dConvergence, ExperimentKind::FastwaveDecay, ExperimentKind::Dispersion3d,
                 ExperimentKind::StrichartzProbe, ExperimentKind::SingleRun})
    if (to_string(k) == name) return k;
  throw Error("config: unknown experiment.kind '" + name + "'");
}

namespace {

DataConfig read_data(const ConfigFile& f, const std::string& prefix, DataConfig d) {
  d.kind = f.get_string(prefix + ".kind", d.kind);
  d.amplitude = f.get_double(prefix + ".amplitude", d.amplitude);
  d.radius = f.get_double(prefix + ".radius", d.radius);
  d.k_lo = f.get_double(prefix + ".k_lo", d.k_lo);
  d.k_hi = f.get_double(prefix + ".k_hi", d.k_hi);
  return d;
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const ConfigFile& f) {
  ExperimentConfig c;
  c.kind = parse_experiment_kind(f.get_string("experiment.kind", to_string(c.kind)));
  c.name = f.get_string("experiment.name", to_string(c.kind));
  c.grid_n = static_cast<int>(f.get_int("grid.n", c.grid_n));
  c.box_length = f.get_double("grid.box_length", c.box_length);
  c.grid3_n = static_cast<int>(f.get_int("grid3.n", c.grid3_n));
  c.box3_length = f.get_double("grid3.box_length", c.box3_length);
  c.gamma = f.get_double("params.gamma", c.gamma);
  c.nu = f.get_double("params.nu", c.nu);
  c.deltas = f.get_doubles("sweep.delta_list", c.deltas);
  c.t_final = f.get_double("time.t_final", c.t_final);
  c.dt = f.get_double("time.dt", c.dt);
  c.cfl = f.get_double("time.cfl", c.cfl);
  c.snapshot_stride = static_cast<int>(f.get_int("time.snapshot_stride", c.snapshot_stride));
  c.q = f.get_double("experiment.q", c.q);
  c.sobolev_index = f.get_double("experiment.sobolev_index", c.sobolev_index);
  c.data = read_data(f, "data", c.data);
  c.data3 = read_data(f, "data3", c.data3);
  if (f.has("probe.k")) {
    c.probe_k.clear();
    for (double k : f.get_doubles("probe.k", {})) c.probe_k.push_back(static_cast<int>(k));
  }
  c.probe_r = f.get_double("probe.r", c.probe_r);
  c.probe_samples = static_cast<int>(f.get_int("probe.samples", c.probe_samples));
  c.probe_envelope_samples = static_cast<int>(f.get_int("probe.envelope_samples", c.probe_envelope_samples));
  c.exponent_min = f.get_double("acceptance.exponent_min", c.exponent_min);
  c.exponent_max = f.get_double("acceptance.exponent_max", c.exponent_max);
  c.seed = static_cast<std::uint64_t>(f.get_int("seed", static_cast<long>(c.seed)));
  c.output_dir = f.get_string("output.dir", c.output_dir.string());
  c.write_snapshots = f.get_bool("output.snapshots", c.write_snapshots);
  const auto unused = f.unused_keys();
  if (!unused.empty()) {
    std::string list;
    for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
    throw Error("config: unknown keys: " + list);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from(ConfigFile::load(path));
}

void ExperimentConfig::validate() const {
  if (grid_n <= 0 || grid_n % 2 != 0 || grid3_n <= 0 || grid3_n % 2 != 0)
    throw Error("config: grid sizes must be positive even integers");
  if (!(box_length > 0.0) || !(box3_length > 0.0)) throw Error("config: box lengths must be positive");
  if (!(gamma > 1.0) || !(nu > 0.0)) throw Error("config: need gamma > 1 and nu > 0");
  if (deltas.empty()) throw Error("config: sweep.delta_list is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw Error("config: deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw Error("config: sweep.delta_list must be strictly decreasing");
  }
  if (!(t_final > 0.0) || !(dt > 0.0) || dt > t_final) throw Error("config: need 0 < time.dt <= time.t_final");
  if (!(cfl > 0.0)) throw Error("config: time.cfl must be positive");
  if (snapshot_stride < 1) throw Error("config: time.snapshot_stride must be >= 1");
  if (!(q >= 1.0)) throw Error("config: experiment.q must be >= 1");
  for (const DataConfig* d : {&data, &data3})
    if (d->kind != "localized" && d->kind != "geostrophic" && d->kind != "zero")
      throw Error("config: unknown data kind '" + d->kind + "'");
  if (probe_samples < 3) throw Error("config: probe.samples must be >= 3");
  if (probe_envelope_samples != 0 && probe_envelope_samples < 3)
    throw Error("config: probe.envelope_samples must be 0 or >= 3");
}

}  // namespace spqg
