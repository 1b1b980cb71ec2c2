// Acceptance suite. One line per criterion:
//   [PASS] 4 integrator-order: ... (12.3 s)
// Arguments select criteria by number; none runs all of them.
// Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spqg/experiment.hpp"
#include "spqg/initial_data.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/qg_solver.hpp"
#include "spqg/scaling_fit.hpp"
#include "spqg/solver2d.hpp"
#include "spqg/strichartz.hpp"
#include "spqg/wave_algebra.hpp"

#ifndef SPQG_CONFIG_DIR
#define SPQG_CONFIG_DIR "configs"
#endif

using namespace spqg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_l2(const SpectralField& a, const SpectralField& b) {
  const double nb = sobolev_norm(b, 0.0);
  const double d = sobolev_norm(a - b, 0.0);
  return nb > 0.0 ? d / nb : d;
}

SpectralField random_field(const BoxGrid& g, int comps, std::uint64_t seed) {
  return random_band_limited(g, comps, seed, 0.0, g.max_wavenumber(), 1.0);
}

ExperimentConfig load_config(const std::string& file) {
  return ExperimentConfig::load(std::filesystem::path(SPQG_CONFIG_DIR) / file);
}

bool strictly_decreasing(const std::vector<SweepRecord>& s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].value < s[i - 1].value)) return false;
  return !s.empty();
}

std::string values_of(const std::vector<SweepRecord>& s) {
  std::string out;
  for (const auto& r : s) out += fmt("%s%.4g", out.empty() ? "" : " ", r.value);
  return out;
}

// Criteria 1 and 2 share their fields.
const BoxGrid& algebra_grid() {
  static const BoxGrid g = BoxGrid::cube(2, 256, 64.0 * M_PI);
  return g;
}

Outcome projection_algebra() {
  const BoxGrid& g = algebra_grid();
  const WaveBasis basis(g, 1.0);
  double sum = 0.0, idem = 0.0, cross = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SpectralField w = random_field(g, 3, seed);
    const double nw = sobolev_norm(w, 0.0);
    const SpectralField p[3] = {project(w, basis, Branch::Zero), project(w, basis, Branch::Plus),
                                project(w, basis, Branch::Minus)};
    sum = std::max(sum, rel_l2(p[0] + p[1] + p[2], w));
    for (int i = 0; i < 3; ++i) {
      const auto bi = static_cast<Branch>(i);
      idem = std::max(idem, rel_l2(project(p[i], basis, bi), p[i]));
      for (int j = 0; j < 3; ++j)
        if (j != i) cross = std::max(cross, sobolev_norm(project(p[j], basis, bi), 0.0) / nw);
    }
  }
  const double worst = std::max({sum, idem, cross});
  return {worst <= 1e-12, fmt("sum %.2e idempotence %.2e cross %.2e (tol 1e-12)", sum, idem, cross)};
}

Outcome slow_fast_identities() {
  const BoxGrid& g = algebra_grid();
  const double nu = 1.0;
  const WaveBasis basis(g, nu);
  double geo = 0.0, div = 0.0, fast = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SpectralField w = random_field(g, 3, seed);
    const auto [s, f] = slow_fast_split(w, basis);
    const SpectralField as = s.slice(0, 1), ws = s.slice(1, 2);
    const SpectralField af = f.slice(0, 1), wf = f.slice(1, 2);
    // Residuals relative to the size of the terms that cancel.
    geo = std::max(geo, sobolev_norm(nu * perp(ws) + gradient(as), 0.0) /
                            (nu * sobolev_norm(ws, 0.0) + sobolev_norm(gradient(as), 0.0)));
    div = std::max(div, sobolev_norm(divergence(ws), 0.0) / sobolev_norm(ws, 1.0));
    fast = std::max(fast, sobolev_norm(curl_2d(wf) - nu * af, 0.0) /
                              (sobolev_norm(curl_2d(wf), 0.0) + nu * sobolev_norm(af, 0.0)));
  }
  const double worst = std::max({geo, div, fast});
  return {worst <= 1e-10, fmt("balance %.2e div %.2e fast-pv %.2e (tol 1e-10)", geo, div, fast)};
}

Outcome propagator_group() {
  const BoxGrid g = BoxGrid::cube(2, 256, 64.0 * M_PI);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.05, 1.0);
  const WaveBasis basis(g, p.nu);
  const SpectralField f = random_field(g, 3, 7);
  const SpectralField one = linear_propagate(f, 1.0, p, basis);
  const double drift = std::abs(sobolev_norm(one, 0.0) / sobolev_norm(f, 0.0) - 1.0);
  const SpectralField split = linear_propagate(linear_propagate(f, 0.37, p, basis), 0.63, p, basis);
  const double comp = rel_l2(split, one);
  return {drift <= 1e-12 && comp <= 1e-12, fmt("L2 drift %.2e composition %.2e (tol 1e-12)", drift, comp)};
}

Outcome integrator_order() {
  const BoxGrid g = BoxGrid::cube(2, 128, 8.0 * M_PI);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  const std::vector<double> dts{1e-2, 5e-3, 2.5e-3};
  const auto cfg = [](double dt) {
    SolverConfig c;
    c.dt = dt;
    c.t_final = 0.5;
    c.cfl = 1e9;  // fixed steps
    c.snapshot_stride = 1 << 20;
    return c;
  };

  const Intermediate2D sys(g, p);
  const State2D w0 = State2D::from_parts(localized_random(g, 3, 11, 0.5, 2.0, 2.0, 0.5),
                                         localized_random(g, 1, 12, 0.5, 2.0, 2.0, 0.5));
  const auto run2 = [&](double dt) { return solve_intermediate(w0, cfg(dt), sys).snapshots.back().fields; };
  const SpectralField ref2 = run2(1.25e-3);
  std::vector<std::pair<double, double>> e2;
  for (double dt : dts) e2.emplace_back(dt, sobolev_norm(run2(dt) - ref2, 0.0));

  const QGState q0{localized_random(g, 1, 13, 0.5, 2.0, 3.0, 1.0), localized_random(g, 1, 14, 0.5, 2.0, 3.0, 0.5),
                   0.0};
  const auto runq = [&](double dt) {
    const auto& s = solve_qg(q0, cfg(dt), p.nu).snapshots.back();
    return SpectralField::stack(s.q, s.u3);
  };
  const SpectralField refq = runq(1.25e-3);
  std::vector<std::pair<double, double>> eq;
  for (double dt : dts) eq.emplace_back(dt, sobolev_norm(runq(dt) - refq, 0.0));

  const double o2 = fit_scaling(e2).exponent, oq = fit_scaling(eq).exponent;
  const bool ok = std::abs(o2 - 4.0) <= 0.3 && std::abs(oq - 4.0) <= 0.3;
  return {ok, fmt("solver2d %.3f qg %.3f (4 +- 0.3)", o2, oq)};
}

Outcome qg_steadiness() {
  const BoxGrid g = BoxGrid::cube(2, 256, 40.0);
  SolverConfig c;
  c.dt = 0.02;
  c.t_final = 1.0;
  c.snapshot_stride = 1 << 20;
  const QGState vortex{gaussian_bump(g, 1.0, 1.0), SpectralField(g, 1), 0.0};
  const QGTrajectory t = solve_qg(vortex, c, 1.0);
  if (!t.ok()) return {false, "run aborted: " + t.message};
  const double change = rel_l2(t.snapshots.back().q, t.snapshots.front().q);
  return {change <= 1e-6, fmt("relative L2 change %.2e (tol 1e-6)", change)};
}

// Criteria 6 and 7 read the same sweep.
const std::vector<SweepRecord>& qg_sweep() {
  static const std::vector<SweepRecord> rows = run_qg_convergence(load_config("qg2d_convergence.cfg"));
  return rows;
}

Outcome fastwave_decay() {
  const auto s = series(qg_sweep(), "fast_lq_linf");
  const double e = s.empty() ? NAN : s.front().exponent;
  const bool ok = strictly_decreasing(s) && e >= 0.15 && e <= 0.6;
  return {ok, fmt("values %s exponent %.3f (strictly decreasing, in [0.15, 0.6])", values_of(s).c_str(), e)};
}

Outcome slow_convergence() {
  const auto s = series(qg_sweep(), "slow_density_sup_h2");
  const double e = s.empty() ? NAN : s.front().exponent;
  const bool ok = strictly_decreasing(s) && e >= 0.2;
  return {ok, fmt("values %s exponent %.3f (monotone, >= 0.2)", values_of(s).c_str(), e)};
}

Outcome pv_initialization() {
  const ExperimentConfig c = load_config("qg2d_convergence.cfg");
  const BoxGrid g = BoxGrid::cube(2, c.grid_n, c.box_length);
  const State2D w0 = make_initial_2d(g, c.data, c.nu, c.seed);
  const QGState q0 = init_from_data(w0.a(), w0.wh(), w0.w3(), c.nu);
  const double err = pv_error_diag(w0, q0, c.nu, 2.0).pv_error;
  const double scale = sobolev_norm(curl_2d(w0.wh()), 0.0) + c.nu * sobolev_norm(w0.a(), 0.0);
  const double rel = err / scale;
  return {rel <= 1e-10, fmt("||pv error(0)||_H0 / data %.2e (tol 1e-10)", rel)};
}

Outcome kernel_dispersion() {
  const BoxGrid g = BoxGrid::cube(2, 1024, 80.0 * M_PI);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.01, 1.0);
  const DispersionProbe probe = DispersionProbe::make(3, p, g);
  const EnvelopeFit env = kernel_envelope(probe, 49);
  const double slope = env.fit.exponent;

  // Same theta, doubled delta and time.
  const DispersionProbe twice = DispersionProbe::make(3, PhysicalParams::make(2.0, 0.02, 1.0), g);
  bool exact = true;
  for (double t : {0.0, 0.1 * probe.t_max, 0.37 * probe.t_max, probe.t_max})
    exact = exact && kernel_supnorm(probe, t) == kernel_supnorm(twice, 2.0 * t);

  const bool ok = std::abs(slope + 1.0) <= 0.3 && exact;
  return {ok, fmt("envelope slope %.3f over theta in [%.1f, %.1f], %zu maxima (-1 +- 0.3); rescaling %s", slope,
                  probe.theta(0.1 * probe.t_max), probe.theta(probe.t_max), env.maxima,
                  exact ? "bit-exact" : "differs")};
}

Outcome strichartz_stability() {
  const BoxGrid g = BoxGrid::cube(2, 512, 16.0 * M_PI);
  const std::vector<double> deltas{0.1, 0.01};
  std::vector<std::vector<double>> ratio(5);
  for (int k = 0; k <= 4; ++k)
    for (double d : deltas) {
      const DispersionProbe probe = DispersionProbe::make(k, PhysicalParams::make(2.0, d, 1.0), g);
      ratio[k].push_back(strichartz_ratio(probe, 4.0, kInf, 33).ratio);
    }
  double across_delta = 0.0;
  for (const auto& r : ratio) across_delta = std::max(across_delta, *std::max_element(r.begin(), r.end()) /
                                                                        *std::min_element(r.begin(), r.end()));
  double across_k = 0.0;
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : ratio) lo = std::min(lo, r[j]), hi = std::max(hi, r[j]);
    across_k = std::max(across_k, hi / lo);
  }
  std::string table;
  for (int k = 0; k <= 4; ++k) table += fmt(" k%d:%.3g/%.3g", k, ratio[k][0], ratio[k][1]);
  const bool ok = across_delta <= 2.0 && across_k <= 4.0;
  return {ok, fmt("spread across delta %.2f (<= 2) across k %.2f (<= 4);%s", across_delta, across_k, table.c_str())};
}

Outcome dispersion_3d() {
  const ExperimentConfig c = load_config("dispersion3d.cfg");
  const auto s = series(run_dispersion3d(c), "perturbation_lq_linf");
  const double e = s.empty() ? NAN : s.front().exponent;
  const bool ok = c.grid3_n == 48 && strictly_decreasing(s) && e >= 0.1;
  return {ok, fmt("%d^3 values %s exponent %.3f (monotone, >= 0.1)", c.grid3_n, values_of(s).c_str(), e)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  ExperimentConfig c = load_config("qg2d_convergence.cfg");
  c.grid_n = 64;
  c.box_length = 16.0 * M_PI;
  c.t_final = 0.2;
  c.dt = 0.01;
  const auto root = std::filesystem::temp_directory_path() / "spqg_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::string bytes[2];
  for (int i = 0; i < 2; ++i) {
    c.output_dir = root / std::to_string(i);
    bytes[i] = slurp(emit_outputs(run_experiment(c), c));
  }
  std::filesystem::remove_all(root);
  const bool ok = !bytes[0].empty() && bytes[0] == bytes[1];
  return {ok, fmt("two runs of %s, %zu CSV bytes, %s", c.name.c_str(), bytes[0].size(),
                  ok ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "projection-algebra", 5, projection_algebra},
      {2, "slow-fast-identities", 5, slow_fast_identities},
      {3, "propagator-group", 5, propagator_group},
      {4, "integrator-order", 120, integrator_order},
      {5, "qg-steadiness", 120, qg_steadiness},
      {6, "fastwave-decay", 900, fastwave_decay},
      {7, "slow-convergence", 900, slow_convergence},
      {8, "pv-initialization", 5, pv_initialization},
      {9, "kernel-dispersion", 120, kernel_dispersion},
      {10, "strichartz-stability", 300, strichartz_stability},
      {11, "dispersion-3d", 1200, dispersion_3d},
      {12, "determinism", 600, determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Criterion 7 reuses the sweep of 6 when both run in one process.
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %d %s: %s (%.1f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures;
}
