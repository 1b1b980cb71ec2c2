#include "spqg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "spqg/fourier_transform.hpp"
#include "spqg/initial_data.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/norms.hpp"
#include "spqg/snapshot_io.hpp"
#include "spqg/strichartz.hpp"

namespace spqg {

namespace {

std::string index_tag(double m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h%g", m);
  return buf;
}

// Runs job(i) for i < count on up to configured_thread_count() threads. The
// first exception is rethrown after all workers have joined.
template <class Job>
void parallel_for(std::size_t count, const Job& job) {
  const std::size_t workers = std::min<std::size_t>(count, std::max(1, configured_thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

class Recorder {
 public:
  explicit Recorder(const ExperimentConfig& c, const BoxGrid& grid)
      : name_(c.name.empty() ? to_string(c.kind) : c.name), grid_n_(grid.n[0]), box_l_(grid.length[0]), seed_(c.seed) {}

  void add(double delta, const std::string& norm, double value) {
    SweepRecord r;
    r.experiment = name_;
    r.delta = delta;
    r.norm_name = norm;
    r.value = value;
    r.grid_n = grid_n_;
    r.box_l = box_l_;
    r.seed = seed_;
    rows_.push_back(std::move(r));
  }
  std::vector<SweepRecord>& rows() { return rows_; }

 private:
  std::string name_;
  int grid_n_;
  double box_l_;
  std::uint64_t seed_;
  std::vector<SweepRecord> rows_;
};

SolverConfig solver_config(const ExperimentConfig& c, bool keep) {
  SolverConfig s;
  s.dt = c.dt;
  s.t_final = c.t_final;
  s.cfl = c.cfl;
  s.snapshot_stride = c.snapshot_stride;
  s.keep_snapshots = keep;
  return s;
}

void say(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

std::string delta_label(double d) {
  std::ostringstream os;
  os << "delta = " << d;
  return os.str();
}

[[noreturn]] void abort_sweep(std::vector<SweepRecord> rows, const std::string& what) {
  fit_series(rows);
  throw ExperimentAborted(what, std::move(rows));
}

// Per-delta measurements of a 2D sweep, filled by the snapshot observer.
struct SweepSeries {
  std::vector<double> fast_sup;
  std::vector<double> slow_error;
  std::vector<double> velocity_error;
  std::vector<double> pv_error;
  std::vector<double> pv_ratio;
  double monitor_ratio = 0.0;
  double interval = 0.0;
  RunStatus status = RunStatus::Completed;
  std::string message;
};

double sup_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, x);
  return s;
}

}  // namespace

State2D make_initial_2d(const BoxGrid& grid, const DataConfig& data, double nu, std::uint64_t seed) {
  if (grid.dim != 2) throw Error("make_initial_2d: 2D grid required");
  if (data.kind == "zero") return State2D::zero(grid);
  const SpectralField w3 = localized_random(grid, 1, seed + 1, data.k_lo, data.k_hi, data.radius, data.amplitude);
  if (data.kind == "localized")
    return State2D::from_parts(localized_random(grid, 3, seed, data.k_lo, data.k_hi, data.radius, data.amplitude), w3);
  if (data.kind == "geostrophic") {
    const SpectralField a = localized_random(grid, 1, seed, data.k_lo, data.k_hi, data.radius, data.amplitude);
    return State2D::from_parts(geostrophic_state(a, nu), w3);
  }
  throw Error("make_initial_2d: unknown data kind '" + data.kind + "'");
}

State3D make_initial_3d(const BoxGrid& grid, const DataConfig& data, std::uint64_t seed) {
  if (grid.dim != 3) throw Error("make_initial_3d: 3D grid required");
  State3D s = State3D::zero(grid);
  if (data.kind == "zero") return s;
  if (data.kind != "localized") throw Error("make_initial_3d: only 'localized' or 'zero' data in 3D");
  s.fields = localized_random(grid, 4, seed, data.k_lo, data.k_hi, data.radius, data.amplitude);
  remove_vertical_mean(s.fields);
  return s;
}

PVDiagnostic pv_error_diag(const State2D& two_d, const QGState& qg, double nu, double m) {
  if (!(two_d.fields.grid() == qg.q.grid())) throw Error("pv_error_diag: grid mismatch");
  if (std::abs(two_d.time - qg.time) > 1e-9 * std::max(1.0, std::abs(qg.time))) {
    std::ostringstream os;
    os << "pv_error_diag: times differ (" << two_d.time << " vs " << qg.time << ")";
    throw Error(os.str());
  }
  const WaveBasis basis(two_d.fields.grid(), nu);
  const SpectralField slow = project(two_d.wave_part(), basis, Branch::Zero);
  const SpectralField a = slow.slice(0, 1);
  const SpectralField w = slow.slice(1, 2);
  SpectralField varpi = curl_2d(w) - nu * a;
  varpi -= qg.q;
  const Geostrophic lim = invert_pv(qg.q, nu);

  PVDiagnostic d;
  d.pv_error = sobolev_norm(varpi, m - 2.0);
  d.velocity_error = sobolev_norm(w - lim.uh, m - 1.0);
  d.ratio = d.pv_error > 0.0 ? d.velocity_error / d.pv_error : 0.0;
  const WavenumberTable table(two_d.fields.grid());
  const Eigen::ArrayXd k2 = table.k2;
  d.symbol_bound = (k2.sqrt() * (1.0 + k2).sqrt() / (nu * nu + k2)).maxCoeff();
  return d;
}

std::vector<SweepRecord> run_qg_convergence(const ExperimentConfig& config, const ProgressFn& progress) {
  const BoxGrid grid = BoxGrid::cube(2, config.grid_n, config.box_length);
  const double m = config.sobolev_index;
  const State2D initial = make_initial_2d(grid, config.data, config.nu, config.seed);
  Recorder rec(config, grid);

  say(progress, "qg: limit system");
  const QGState qg0 = init_from_data(initial.a(), initial.wh(), initial.w3(), config.nu);
  const QGTrajectory qg = solve_qg(qg0, solver_config(config, true), config.nu);
  if (!qg.ok()) abort_sweep(rec.rows(), "qg solver aborted: " + qg.message);
  std::vector<Geostrophic> lim;
  lim.reserve(qg.snapshots.size());
  for (const auto& s : qg.snapshots) lim.push_back(invert_pv(s.q, config.nu));

  std::vector<SweepSeries> out(config.deltas.size());
  parallel_for(config.deltas.size(), [&](std::size_t i) {
    const PhysicalParams params = PhysicalParams::make(config.gamma, config.deltas[i], config.nu);
    const Intermediate2D system(grid, params);
    SweepSeries& s = out[i];
    std::size_t index = 0;
    auto observe = [&](const State2D& state) {
      if (index >= qg.snapshots.size()) throw Error("qg convergence: snapshot count mismatch");
      const auto [slow, fast] = slow_fast_split(state.wave_part(), system.basis());
      s.fast_sup.push_back(sup_norm(fast));
      s.slow_error.push_back(sobolev_norm(slow.slice(0, 1) - lim[index].b, m));
      const SpectralField dv = SpectralField::stack(slow.slice(1, 2) - lim[index].uh, state.w3() - qg.snapshots[index].u3);
      s.velocity_error.push_back(sobolev_norm(dv, m - 1.0));
      const PVDiagnostic pv = pv_error_diag(state, qg.snapshots[index], config.nu, m);
      s.pv_error.push_back(pv.pv_error);
      s.pv_ratio.push_back(pv.ratio);
      ++index;
    };
    say(progress, "qg: intermediate system at " + delta_label(config.deltas[i]));
    const Trajectory2D traj = solve_intermediate(initial, solver_config(config, false), system, observe);
    s.interval = traj.snapshot_interval;
    s.monitor_ratio = traj.initial_norm > 0.0 ? traj.sup_norm / traj.initial_norm : 0.0;
    s.status = traj.status;
    s.message = traj.message;
  });

  const std::string mt = index_tag(m);
  const std::string mt1 = index_tag(m - 1.0);
  const std::string mt2 = index_tag(m - 2.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const SweepSeries& s = out[i];
    if (s.status != RunStatus::Completed)
      abort_sweep(rec.rows(), "intermediate solver aborted at " + delta_label(config.deltas[i]) + ": " + s.message);
    const double d = config.deltas[i];
    const double fast_lq = time_lebesgue_norm(s.fast_sup, s.interval, config.q);
    const double fast_l1 = time_lebesgue_norm(s.fast_sup, s.interval, 1.0);
    const double pv_sup = sup_of(s.pv_error);
    const double pv0 = s.pv_error.front();
    // Empirical Gronwall rate: sup ||varpi|| = (||varpi(0)|| + int ||W^F||_inf) e^{cT}.
    const double base = pv0 + fast_l1;
    const double rate = base > 0.0 && pv_sup > 0.0 ? std::max(0.0, std::log(pv_sup / base) / config.t_final) : 0.0;
    rec.add(d, "fast_lq_linf", fast_lq);
    rec.add(d, "slow_density_sup_" + mt, sup_of(s.slow_error));
    rec.add(d, "slow_velocity_sup_" + mt1, sup_of(s.velocity_error));
    rec.add(d, "pv_error_sup_" + mt2, pv_sup);
    rec.add(d, "pv_error_initial_" + mt2, pv0);
    rec.add(d, "pv_velocity_ratio_max", sup_of(s.pv_ratio));
    rec.add(d, "gronwall_rate", rate);
    rec.add(d, "monitor_sup_ratio", s.monitor_ratio);
    say(progress, "qg: done " + delta_label(d));
  }
  fit_series(rec.rows());
  return rec.rows();
}

std::vector<SweepRecord> run_fastwave_decay(const ExperimentConfig& config, const ProgressFn& progress) {
  const BoxGrid grid = BoxGrid::cube(2, config.grid_n, config.box_length);
  const State2D initial = make_initial_2d(grid, config.data, config.nu, config.seed);
  Recorder rec(config, grid);
  std::vector<SweepSeries> out(config.deltas.size());
  parallel_for(config.deltas.size(), [&](std::size_t i) {
    const PhysicalParams params = PhysicalParams::make(config.gamma, config.deltas[i], config.nu);
    const Intermediate2D system(grid, params);
    SweepSeries& s = out[i];
    auto observe = [&](const State2D& state) {
      s.fast_sup.push_back(sup_norm(project(state.wave_part(), system.basis(), BranchSet::Fast)));
    };
    say(progress, "fastwave: " + delta_label(config.deltas[i]));
    const Trajectory2D traj = solve_intermediate(initial, solver_config(config, false), system, observe);
    s.interval = traj.snapshot_interval;
    s.monitor_ratio = traj.initial_norm > 0.0 ? traj.sup_norm / traj.initial_norm : 0.0;
    s.status = traj.status;
    s.message = traj.message;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    const SweepSeries& s = out[i];
    if (s.status != RunStatus::Completed)
      abort_sweep(rec.rows(), "intermediate solver aborted at " + delta_label(config.deltas[i]) + ": " + s.message);
    rec.add(config.deltas[i], "fast_lq_linf", time_lebesgue_norm(s.fast_sup, s.interval, config.q));
    rec.add(config.deltas[i], "fast_initial_linf", s.fast_sup.front());
    rec.add(config.deltas[i], "monitor_sup_ratio", s.monitor_ratio);
  }
  fit_series(rec.rows());
  return rec.rows();
}

std::vector<SweepRecord> run_dispersion3d(const ExperimentConfig& config, const ProgressFn& progress) {
  const BoxGrid grid3 = BoxGrid::cube(3, config.grid3_n, config.box3_length);
  const BoxGrid horizontal = horizontal_grid(grid3);
  const State2D initial2 = make_initial_2d(horizontal, config.data, config.nu, config.seed);
  const State3D initial3 = make_initial_3d(grid3, config.data3, config.seed + 101);
  Recorder rec(config, grid3);

  struct Result {
    std::vector<double> sup;
    double interval = 0.0;
    double monitor_ratio = 0.0;
    std::string failure;
  };
  std::vector<Result> out(config.deltas.size());
  parallel_for(config.deltas.size(), [&](std::size_t i) {
    const PhysicalParams params = PhysicalParams::make(config.gamma, config.deltas[i], config.nu);
    Result& r = out[i];
    say(progress, "dispersion3d: 2D forcing at " + delta_label(config.deltas[i]));
    // Half the 3D step so every RK4 stage time of the 3D run is a stored snapshot.
    SolverConfig c2 = solver_config(config, true);
    c2.dt = config.dt / 2.0;
    c2.snapshot_stride = 1;
    const Trajectory2D traj2 = solve_intermediate(initial2, c2, params);
    if (!traj2.ok()) {
      r.failure = "intermediate solver: " + traj2.message;
      return;
    }
    const ForcingContext ctx(traj2, params, grid3);
    say(progress, "dispersion3d: 3D perturbation at " + delta_label(config.deltas[i]));
    auto observe = [&](const State3D& s) { r.sup.push_back(sup_norm(s.fields)); };
    const Trajectory3D traj3 = solve_perturbed(initial3, ctx, solver_config(config, false), params, observe);
    if (!traj3.ok()) {
      r.failure = "perturbation solver: " + traj3.message;
      return;
    }
    r.interval = traj3.snapshot_interval;
    r.monitor_ratio = traj3.initial_norm > 0.0 ? traj3.sup_norm / traj3.initial_norm : 0.0;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].failure.empty())
      abort_sweep(rec.rows(), "dispersion3d aborted at " + delta_label(config.deltas[i]) + ": " + out[i].failure);
    rec.add(config.deltas[i], "perturbation_lq_linf", time_lebesgue_norm(out[i].sup, out[i].interval, config.q));
    rec.add(config.deltas[i], "perturbation_initial_linf", out[i].sup.front());
    rec.add(config.deltas[i], "monitor_sup_ratio", out[i].monitor_ratio);
  }
  fit_series(rec.rows());
  return rec.rows();
}

std::vector<SweepRecord> run_strichartz_probe(const ExperimentConfig& config, const ProgressFn& progress) {
  const BoxGrid grid = BoxGrid::cube(2, config.grid_n, config.box_length);
  Recorder rec(config, grid);
  struct Job {
    int k;
    std::size_t di;
    double ratio = 0.0;
    double decay = 0.0;
  };
  std::vector<Job> jobs;
  for (int k : config.probe_k)
    for (std::size_t di = 0; di < config.deltas.size(); ++di) jobs.push_back({k, di});
  parallel_for(jobs.size(), [&](std::size_t j) {
    Job& job = jobs[j];
    const PhysicalParams params = PhysicalParams::make(config.gamma, config.deltas[job.di], config.nu);
    const DispersionProbe probe = DispersionProbe::make(job.k, params, grid);
    say(progress, "probe: k = " + std::to_string(job.k) + ", " + delta_label(params.delta));
    job.ratio = strichartz_ratio(probe, config.q, config.probe_r, config.probe_samples).ratio;
    if (config.probe_envelope_samples > 0) job.decay = -kernel_envelope(probe, config.probe_envelope_samples).fit.exponent;
  });
  for (const Job& job : jobs) {
    const std::string k = std::to_string(job.k);
    rec.add(config.deltas[job.di], "strichartz_ratio_k" + k, job.ratio);
    if (config.probe_envelope_samples > 0) rec.add(config.deltas[job.di], "kernel_decay_rate_k" + k, job.decay);
  }
  fit_series(rec.rows());
  return rec.rows();
}

std::vector<SweepRecord> run_single(const ExperimentConfig& config, const ProgressFn& progress) {
  const BoxGrid grid = BoxGrid::cube(2, config.grid_n, config.box_length);
  const PhysicalParams params = PhysicalParams::make(config.gamma, config.deltas.front(), config.nu);
  const State2D initial = make_initial_2d(grid, config.data, config.nu, config.seed);
  const Intermediate2D system(grid, params);
  Recorder rec(config, grid);

  const std::filesystem::path dir = config.output_dir / "snapshots";
  if (config.write_snapshots) std::filesystem::create_directories(dir);
  std::vector<double> fast_sup;
  std::vector<double> l2;
  int index = 0;
  auto observe = [&](const State2D& s) {
    fast_sup.push_back(sup_norm(project(s.wave_part(), system.basis(), BranchSet::Fast)));
    l2.push_back(sobolev_norm(s.fields, 0.0));
    if (!config.write_snapshots) return;
    char stem[32];
    std::snprintf(stem, sizeof stem, "state_%05d", index);
    write_snapshot(dir / (std::string(stem) + ".spqg"), s.fields);
    const auto exact = [](double v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    write_metadata(dir / (std::string(stem) + ".meta"),
                   {{"time", exact(s.time)},
                    {"delta", exact(params.delta)},
                    {"gamma", exact(params.gamma)},
                    {"nu", exact(params.nu)},
                    {"components", "a,w1,w2,w3"},
                    {"seed", std::to_string(config.seed)}});
    ++index;
  };
  say(progress, "single run: " + delta_label(params.delta));
  const Trajectory2D traj = solve_intermediate(initial, solver_config(config, false), system, observe);
  if (!traj.ok()) abort_sweep(rec.rows(), "intermediate solver aborted: " + traj.message);
  rec.add(params.delta, "fast_lq_linf", time_lebesgue_norm(fast_sup, traj.snapshot_interval, config.q));
  rec.add(params.delta, "l2_relative_drift", l2.front() > 0.0 ? std::abs(l2.back() - l2.front()) / l2.front() : 0.0);
  rec.add(params.delta, "monitor_sup_ratio", traj.initial_norm > 0.0 ? traj.sup_norm / traj.initial_norm : 0.0);
  fit_series(rec.rows());
  return rec.rows();
}

std::vector<SweepRecord> run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::Qg2dConvergence:
      return run_qg_convergence(config, progress);
    case ExperimentKind::FastwaveDecay:
      return run_fastwave_decay(config, progress);
    case ExperimentKind::Dispersion3d:
      return run_dispersion3d(config, progress);
    case ExperimentKind::StrichartzProbe:
      return run_strichartz_probe(config, progress);
    case ExperimentKind::SingleRun:
      return run_single(config, progress);
  }
  throw Error("run_experiment: unknown kind");
}

}  // namespace spqg
