#include "spqg/norms.hpp"

#include <cmath>

#include "spqg/dyadic.hpp"
#include "spqg/fourier_transform.hpp"

namespace spqg {

namespace {

bool in_range(double x) { return x >= 1.0 && x <= kInf; }

Eigen::ArrayXd pointwise_magnitude(const SpectralField& f, int padding) {
  const SpectralField g = padding > 1 ? zero_pad(f, padding) : f;
  const FourierTransform fft(g.grid());
  Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(g.grid().size()));
  for (int c = 0; c < g.components(); ++c) sq += fft.backward(g.component(c)).square();
  return sq.sqrt();
}

double sum_power(std::span<const double> terms, double sigma) {
  if (std::isinf(sigma)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, sigma);
  return std::pow(s, 1.0 / sigma);
}

}  // namespace

void NormSpec::validate() const {
  if (!in_range(q) || !in_range(r) || !in_range(sigma) || !std::isfinite(m))
    throw Error("NormSpec: exponents out of range");
}

double sobolev_norm(const SpectralField& f, double m) {
  const BoxGrid& g = f.grid();
  const WavenumberTable table(g);
  const Eigen::ArrayXd weight = (1.0 + table.k2).pow(m);
  const Eigen::ArrayXd power = f.coeffs().cwiseAbs2().rowwise().sum().array();
  const double n = static_cast<double>(g.size());
  return std::sqrt((weight * power).sum() * g.volume() / (n * n));
}

double sup_norm(const SpectralField& f, int padding) { return pointwise_magnitude(f, padding).maxCoeff(); }

double l1_norm(const SpectralField& f, int padding) {
  const Eigen::ArrayXd mag = pointwise_magnitude(f, padding);
  const BoxGrid& g = f.grid();
  return mag.sum() * g.volume() / static_cast<double>(mag.size());
}

double lebesgue_norm(const SpectralField& f, double r, int padding) {
  if (r == 2.0) return sobolev_norm(f, 0.0);
  if (std::isinf(r)) return sup_norm(f, padding);
  throw Error("lebesgue_norm: only r = 2 and r = inf are supported");
}

double besov_norm(const SpectralField& f, const NormSpec& spec, int padding) {
  spec.validate();
  if (spec.r != 2.0 && !std::isinf(spec.r)) throw Error("besov_norm: unsupported space exponent r");
  const DyadicLadder ladder = DyadicLadder::covering(f.grid());
  std::vector<double> terms;
  for (int k = ladder.k_min; k <= ladder.k_max; ++k)
    terms.push_back(std::pow(2.0, spec.m * k) *
                    lebesgue_norm(dyadic_block(f, k), spec.r, padding));
  return sum_power(terms, spec.sigma);
}

double time_lebesgue_norm(std::span<const double> values, double dt, double q) {
  if (values.empty()) return 0.0;
  for (double v : values)
    if (v < 0.0 || std::isnan(v)) throw Error("time_lebesgue_norm: negative or NaN value");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  if (q < 1.0) throw Error("time_lebesgue_norm: q must be >= 1");
  if (values.size() < 2) throw Error("time_lebesgue_norm: need at least two samples for finite q");
  if (!(dt > 0.0)) throw Error("time_lebesgue_norm: dt must be positive");
  double s = 0.5 * (std::pow(values.front(), q) + std::pow(values.back(), q));
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += std::pow(values[i], q);
  return std::pow(s * dt, 1.0 / q);
}

double chemin_lerner_norm(std::span<const SpectralField> snapshots, double dt, const NormSpec& spec,
                          int padding) {
  spec.validate();
  if (snapshots.empty()) return 0.0;
  if (!std::isinf(spec.q) && snapshots.size() < 2)
    throw Error("chemin_lerner_norm: need at least two snapshots for finite q");
  const DyadicLadder ladder = DyadicLadder::covering(snapshots.front().grid());
  std::vector<double> terms;
  std::vector<double> block(snapshots.size());
  for (int k = ladder.k_min; k <= ladder.k_max; ++k) {
    for (std::size_t s = 0; s < snapshots.size(); ++s)
      block[s] = lebesgue_norm(dyadic_block(snapshots[s], k), spec.r, padding);
    terms.push_back(std::pow(2.0, spec.m * k) * time_lebesgue_norm(block, dt, spec.q));
  }
  return sum_power(terms, spec.sigma);
}

double lebesgue_besov_norm(std::span<const SpectralField> snapshots, double dt, const NormSpec& spec,
                           int padding) {
  std::vector<double> per_time;
  per_time.reserve(snapshots.size());
  for (const auto& s : snapshots) per_time.push_back(besov_norm(s, spec, padding));
  return time_lebesgue_norm(per_time, dt, spec.q);
}

}  // namespace spqg
