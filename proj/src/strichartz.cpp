#include "spqg/strichartz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spqg/dyadic.hpp"
#include "spqg/initial_data.hpp"
#include "spqg/norms.hpp"

namespace spqg {

namespace {

// exp(-1/(1-s^2)) on log2|eta| over (log2(4/3), log2(3/2)) + k.
double inner_bump(int k, double radius) {
  if (!(radius > 0.0)) return 0.0;
  const double lo = std::log2(4.0 / 3.0) + k;
  const double hi = std::log2(1.5) + k;
  const double s = 2.0 * (std::log2(radius) - lo) / (hi - lo) - 1.0;
  if (!(std::abs(s) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

}  // namespace

double mk(int k, double nu) {
  if (!(nu > 0.0)) throw Error("mk: nu must be positive");
  return k <= std::log2(nu) ? 1.0 : std::ldexp(1.0, 3 * k);
}

bool admissible(double q, double r) {
  if (!(q >= 2.0 && r >= 2.0)) return false;
  if (q == 2.0 && std::isinf(r)) return false;
  return 1.0 / q + 1.0 / r <= 0.5;
}

DispersionProbe DispersionProbe::make(int k, const PhysicalParams& params, const BoxGrid& grid, double t_max) {
  if (grid.dim != 2) throw Error("DispersionProbe: 2D grid required");
  DispersionProbe p;
  p.k = k;
  p.nu = params.nu;
  p.delta = params.delta;
  p.gamma_bar = params.gamma_bar;
  const double top = 1.5 * std::ldexp(1.0, k);
  const double nyquist = std::min(grid.n[0] / 2 * grid.fundamental(0), grid.n[1] / 2 * grid.fundamental(1));
  if (top >= nyquist)
    throw Error("DispersionProbe: block k = " + std::to_string(k) + " not resolved on " + grid.describe());
  const WavenumberTable table(grid);
  p.profile = SpectralField(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    p.profile.coeffs()(row, 0) = inner_bump(k, std::sqrt(table.k2(row)));
  }
  if (p.profile.coeffs().cwiseAbs().maxCoeff() == 0.0)
    throw Error("DispersionProbe: no lattice modes inside block k = " + std::to_string(k));
  p.t_max = t_max < 0.0 ? p.wrap_time() : t_max;
  if (p.t_max > p.wrap_time() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "DispersionProbe: t_max " << p.t_max << " exceeds the wrap-around bound " << p.wrap_time();
    throw Error(os.str());
  }
  p.profile_l1 = l1_norm(p.profile, p.padding);
  return p;
}

double DispersionProbe::wrap_time() const {
  const BoxGrid& g = profile.grid();
  return 0.4 * std::min(g.length[0], g.length[1]) * delta / gamma_bar;
}

SpectralField DispersionProbe::evolve(double t) const {
  const double th = theta(t);
  const WavenumberTable table(profile.grid());
  SpectralField out(profile.grid(), profile.components());
  for (std::size_t i = 0; i < profile.modes(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Complex c = profile.coeffs()(row, 0);
    if (c != 0.0) out.coeffs()(row, 0) = c * std::polar(1.0, th * std::sqrt(nu * nu + table.k2(row)));
  }
  return out;
}

double kernel_supnorm(const DispersionProbe& probe, double t) {
  if (t < 0.0 || t > probe.t_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "kernel_supnorm: t = " << t << " outside the probe window [0, " << probe.t_max << "]";
    throw Error(os.str());
  }
  if (probe.profile_l1 == 0.0) return 0.0;
  return sup_norm(probe.evolve(t), probe.padding) / probe.profile_l1;
}

EnvelopeFit kernel_envelope(const DispersionProbe& probe, int samples) {
  if (samples < 3) throw Error("kernel_envelope: need at least 3 samples");
  EnvelopeFit env;
  const double t1 = probe.t_max;
  const double t0 = 0.1 * t1;
  for (int i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? t1 : t0 * std::pow(10.0, static_cast<double>(i) / (samples - 1));
    env.times.push_back(t);
    env.values.push_back(kernel_supnorm(probe, t));
  }
  std::vector<std::pair<double, double>> peaks;
  for (int i = 1; i + 1 < samples; ++i)
    if (env.values[i] >= env.values[i - 1] && env.values[i] >= env.values[i + 1])
      peaks.emplace_back(env.times[i], env.values[i]);
  env.maxima = peaks.size();
  if (peaks.size() < 3) {
    peaks.clear();
    for (int i = 0; i < samples; ++i) peaks.emplace_back(env.times[i], env.values[i]);
  }
  env.fit = fit_scaling(peaks);
  return env;
}

StrichartzMeasure strichartz_ratio(const DispersionProbe& probe, double q, double r, int samples) {
  if (!admissible(q, r)) {
    std::ostringstream os;
    os << "strichartz_ratio: (q, r) = (" << q << ", " << r << ") is not admissible";
    throw Error(os.str());
  }
  if (r != 2.0 && !std::isinf(r)) throw Error("strichartz_ratio: r must be 2 or inf");
  if (samples < 2) throw Error("strichartz_ratio: need at least 2 time samples");
  StrichartzMeasure m;
  m.t_max = probe.t_max;
  const double dt = probe.t_max / (samples - 1);
  std::vector<double> values;
  for (int i = 0; i < samples; ++i) values.push_back(lebesgue_norm(probe.evolve(i * dt), r, probe.padding));
  m.lhs = time_lebesgue_norm(values, dt, q);
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  m.rhs = std::pow(2.0, 2.0 * probe.k * (0.5 - inv_r)) * std::pow(mk(probe.k, probe.nu) * probe.delta, 1.0 / q) *
          sobolev_norm(probe.profile, 0.0);
  m.ratio = m.rhs > 0.0 ? m.lhs / m.rhs : 0.0;
  return m;
}

double block_prefactor(int k, double gbar_nu, double q, double r) {
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const bool slow = std::ldexp(1.0, k) <= gbar_nu;
  return std::pow(2.0, 3.0 * k * (0.5 - inv_r - (slow ? inv_q : 0.0)));
}

BlockDecay verify_3d_block_decay(int k, const PhysicalParams& params, const std::vector<double>& deltas, double q,
                                 double r, const BoxGrid& grid3, double t_final, int samples, std::uint64_t seed,
                                 double amplitude, double radius) {
  if (!admissible(q, r)) throw Error("verify_3d_block_decay: (q, r) is not admissible");
  if (grid3.dim != 3) throw Error("verify_3d_block_decay: 3D grid required");
  if (deltas.size() < 3 || samples < 3) throw Error("verify_3d_block_decay: window too short for a 3-point fit");
  const double smallest = *std::min_element(deltas.begin(), deltas.end());
  double shortest = grid3.length[0];
  for (int a = 1; a < 3; ++a) shortest = std::min(shortest, grid3.length[a]);
  const double wrap = 0.4 * shortest * smallest / params.gamma_bar;
  if (t_final > wrap) {
    std::ostringstream os;
    os << "verify_3d_block_decay: T = " << t_final << " exceeds the wrap-around time " << wrap << " at delta "
       << smallest;
    throw Error(os.str());
  }

  const double band = std::ldexp(1.0, k);
  const double top = std::min({grid3.n[0] / 3.0 * grid3.fundamental(0), grid3.n[1] / 3.0 * grid3.fundamental(1),
                               grid3.n[2] / 3.0 * grid3.fundamental(2)});
  if ((8.0 / 3.0) * band > top)
    throw Error("verify_3d_block_decay: block k = " + std::to_string(k) + " not resolved on " + grid3.describe());
  // Dispersion only shows for localized data; a field spread over the whole
  // box keeps its sup norm.
  SpectralField f = localized_random(grid3, 4, seed, 0.75 * band, (8.0 / 3.0) * band, radius, 1.0);
  remove_vertical_mean(f);
  f = dyadic_block(f, k);
  const double l2 = sobolev_norm(f, 0.0);
  if (l2 > 0.0) f *= amplitude / l2;

  BlockDecay out;
  out.predicted_exponent = 1.0 / q;
  out.prefactor = block_prefactor(k, params.gamma_bar * params.nu, q, r);
  out.deltas = deltas;
  const WaveBasis basis(grid3, params.nu);
  const double dt = t_final / (samples - 1);
  std::vector<std::pair<double, double>> points;
  for (double d : deltas) {
    const PhysicalParams p = PhysicalParams::make(params.gamma, d, params.nu);
    std::vector<double> values;
    for (int i = 0; i < samples; ++i) values.push_back(lebesgue_norm(linear_propagate(f, i * dt, p, basis), r, 2));
    const double norm = time_lebesgue_norm(values, dt, q);
    out.norms.push_back(norm);
    points.emplace_back(d, norm);
  }
  if (amplitude > 0.0) out.fit = fit_scaling(points);
  else out.fit.samples = points;
  return out;
}

}  // namespace spqg
