#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>

#include <CLI11.hpp>

#include "spqg/experiment.hpp"
#include "spqg/norms.hpp"
#include "spqg/snapshot_io.hpp"
#include "spqg/strichartz.hpp"

using namespace spqg;

namespace {

int cmd_run(const std::string& path, const std::vector<std::string>& overrides, bool quiet) {
  ConfigFile file = ConfigFile::load(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
    file.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  const ExperimentConfig config = ExperimentConfig::from(file);

  std::mutex io;
  ProgressFn progress;
  if (!quiet)
    progress = [&io](const std::string& msg) {
      std::lock_guard lock(io);
      std::cerr << "[spqg] " << msg << '\n';
    };
  try {
    const auto records = run_experiment(config, progress);
    const auto csv = emit_outputs(records, config);
    std::cout << csv.string() << '\n';
    return 0;
  } catch (const ExperimentAborted& e) {
    const auto csv = emit_outputs(e.partial(), config);
    std::cerr << "spqg: " << e.what() << "\npartial results in " << csv.string() << '\n';
    return 2;
  }
}

struct ProbeArgs {
  std::vector<int> k{0, 1, 2, 3, 4};
  std::vector<double> deltas{0.1, 0.01};
  double gamma = 2.0;
  double nu = 1.0;
  double q = 4.0;
  double r = kInf;
  int n = 256;
  double box = 64.0 * M_PI;
  int samples = 65;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_probe(const ProbeArgs& a) {
  const BoxGrid grid = BoxGrid::cube(2, a.n, a.box);
  std::cout << "k,nu,delta,q,r,t_max,lhs,rhs,ratio,fitted_exponent,residual\n";
  for (int k : a.k) {
    std::vector<StrichartzMeasure> rows;
    std::vector<std::pair<double, double>> pts;
    for (double d : a.deltas) {
      const PhysicalParams params = PhysicalParams::make(a.gamma, d, a.nu);
      const DispersionProbe probe = DispersionProbe::make(k, params, grid);
      rows.push_back(strichartz_ratio(probe, a.q, a.r, a.samples));
      pts.emplace_back(d, rows.back().lhs);
    }
    double exponent = NAN;
    double residual = NAN;
    if (pts.size() >= 3) {
      const ScalingFit fit = fit_scaling(pts);
      exponent = fit.exponent;
      residual = fit.residual;
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
      std::cout << k << ',' << num(a.nu) << ',' << num(a.deltas[i]) << ',' << num(a.q) << ',' << num(a.r) << ','
                << num(rows[i].t_max) << ',' << num(rows[i].lhs) << ',' << num(rows[i].rhs) << ','
                << num(rows[i].ratio) << ',' << num(exponent) << ',' << num(residual) << '\n';
  }
  return 0;
}

int cmd_inspect(const std::string& path) {
  const SpectralField f = read_snapshot(std::filesystem::path(path));
  const BoxGrid& g = f.grid();
  std::cout << "grid        " << g.describe() << '\n';
  std::cout << "components  " << f.components() << '\n';
  std::cout << "conj defect " << f.conjugate_symmetry_defect() << '\n';
  std::cout << "component   L2            H1            Linf\n";
  for (int c = 0; c < f.components(); ++c) {
    const SpectralField s = f.slice(c, 1);
    std::printf("%-11d %-13.6e %-13.6e %-13.6e\n", c, sobolev_norm(s, 0.0), sobolev_norm(s, 1.0), sup_norm(s));
  }
  std::filesystem::path meta = path;
  meta.replace_extension(".meta");
  if (std::filesystem::exists(meta))
    for (const auto& [k, v] : read_metadata(meta)) std::cout << k << " = " << v << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral lab for the rotating compressible Euler / QG limit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "Override a config key, key=value");
  run->add_flag("-q,--quiet", quiet, "No progress on stderr");

  ProbeArgs pa;
  auto* probe = app.add_subcommand("probe", "Strichartz ratios of the 2D dispersive kernel as CSV");
  probe->add_option("-k", pa.k, "Dyadic blocks")->expected(1, -1);
  probe->add_option("--delta", pa.deltas, "Mach numbers")->expected(1, -1);
  probe->add_option("--gamma", pa.gamma);
  probe->add_option("--nu", pa.nu);
  probe->add_option("-q", pa.q);
  probe->add_option("-r", pa.r, "2 or inf");
  probe->add_option("-n", pa.n, "Grid points per axis");
  probe->add_option("-L,--box-length", pa.box);
  probe->add_option("--samples", pa.samples, "Time samples in the window");

  std::string snapshot;
  auto* inspect = app.add_subcommand("inspect", "Summarize a snapshot file");
  inspect->add_option("snapshot", snapshot)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, overrides, quiet);
    if (*probe) return cmd_probe(pa);
    if (*inspect) return cmd_inspect(snapshot);
  } catch (const std::exception& e) {
    std::cerr << "spqg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
