#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spqg/norms.hpp"

namespace spqg {

/// Flat "key = value" text with dotted keys, '#' comments and comma lists.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, const std::string& origin = "<config>");
  static ConfigFile parse_string(const std::string& text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Keys never read through a getter; typos show up here.
  std::vector<std::string> unused_keys() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string require(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> used_;
};

enum class ExperimentKind { Qg2dConvergence, FastwaveDecay, Dispersion3d, StrichartzProbe, SingleRun };
std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Initial data recipe. kind: localized (ill-prepared, every component an
/// independent localized random field), geostrophic (balanced a, w_h plus a
/// localized w3), zero.
struct DataConfig {
  std::string kind = "localized";
  double amplitude = 0.5;
  double radius = 2.0;
  double k_lo = 1.0;
  double k_hi = 2.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Qg2dConvergence;
  std::string name;  // defaults to the kind

  int grid_n = 256;
  double box_length = 201.06192982974676;  // 64 pi
  int grid3_n = 48;
  double box3_length = 25.132741228718345;  // 8 pi

  double gamma = 2.0;
  double nu = 1.0;
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};

  double t_final = 1.0;
  double dt = 5e-3;
  double cfl = 0.5;
  int snapshot_stride = 2;

  double q = 4.0;
  double sobolev_index = 2.0;  // m' of the slow-part diagnostics

  DataConfig data;
  DataConfig data3{"localized", 0.05, 3.0, 0.5, 2.0};

  std::vector<int> probe_k{0, 1, 2, 3, 4};
  double probe_r = kInf;
  int probe_samples = 33;
  /// Samples of the kernel envelope per (k, delta); 0 skips it.
  int probe_envelope_samples = 0;

  double exponent_min = 0.0;
  double exponent_max = 0.0;

  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  bool write_snapshots = false;

  static ExperimentConfig from(const ConfigFile& file);
  static ExperimentConfig load(const std::filesystem::path& path);
  void validate() const;
};

}  // namespace spqg
