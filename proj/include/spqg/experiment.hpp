#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "spqg/config.hpp"
#include "spqg/qg_solver.hpp"
#include "spqg/solver3d.hpp"

namespace spqg {

/// One row of a sweep: a named norm measured at one delta, plus the fitted
/// delta-exponent of its series (NaN when no fit was possible).
struct SweepRecord {
  std::string experiment;
  double delta = 0.0;
  std::string norm_name;
  double value = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
  int grid_n = 0;
  double box_l = 0.0;
  std::uint64_t seed = 0;
};

/// A solver aborted mid-sweep; carries the rows measured before the abort.
class ExperimentAborted : public Error {
 public:
  ExperimentAborted(const std::string& what, std::vector<SweepRecord> partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<SweepRecord>& partial() const { return partial_; }

 private:
  std::vector<SweepRecord> partial_;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Initial 2D state (a, w1, w2, w3) from a data recipe.
State2D make_initial_2d(const BoxGrid& grid, const DataConfig& data, double nu, std::uint64_t seed);
/// Initial 3D perturbation with its x3-average removed.
State3D make_initial_3d(const BoxGrid& grid, const DataConfig& data, std::uint64_t seed);

struct PVDiagnostic {
  double pv_error = 0.0;        // ||curl w^S - nu a^S - q^L||_{H^{m-2}}
  double velocity_error = 0.0;  // ||w^S - u_h^L||_{H^{m-1}}
  double ratio = 0.0;           // velocity_error / pv_error (0 when pv_error = 0)
  double symbol_bound = 0.0;    // sup over the lattice of |eta| (1+|eta|^2)^{1/2} / (nu^2+|eta|^2)
};

/// Compares the slow part of a 2D state with a QG state at the same time.
PVDiagnostic pv_error_diag(const State2D& two_d, const QGState& qg, double nu, double m = 2.0);

/// Fills exponent/residual for every norm series with at least three
/// positive values; other series get NaN.
void fit_series(std::vector<SweepRecord>& records);

std::vector<SweepRecord> run_qg_convergence(const ExperimentConfig& config, const ProgressFn& progress = {});
std::vector<SweepRecord> run_fastwave_decay(const ExperimentConfig& config, const ProgressFn& progress = {});
std::vector<SweepRecord> run_dispersion3d(const ExperimentConfig& config, const ProgressFn& progress = {});
std::vector<SweepRecord> run_strichartz_probe(const ExperimentConfig& config, const ProgressFn& progress = {});
std::vector<SweepRecord> run_single(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Dispatch on config.kind.
std::vector<SweepRecord> run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Values of one series ordered by delta descending.
std::vector<SweepRecord> series(const std::vector<SweepRecord>& records, const std::string& norm_name);

/// <dir>/<name>.csv plus <dir>/<name>_<norm>.dat for every fitted series.
/// Returns the CSV path.
std::filesystem::path emit_outputs(const std::vector<SweepRecord>& records, const ExperimentConfig& config);

std::string records_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(const std::filesystem::path& path);

}  // namespace spqg
