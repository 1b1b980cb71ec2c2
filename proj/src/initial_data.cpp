#include "spqg/initial_data.hpp"

#include <cmath>
#include <random>

#include "spqg/fourier_transform.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/norms.hpp"

namespace spqg {

namespace {

// Box-Muller on top of mt19937_64 so the sample sequence does not depend on
// the standard library's distribution implementation.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double scale = 1.0 / 18446744073709551616.0;  // 2^-64
    double u1 = 0.0;
    while (u1 == 0.0) u1 = static_cast<double>(engine_()) * scale;
    const double u2 = static_cast<double>(engine_()) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Eigen::ArrayXd envelope(const BoxGrid& g, double radius) {
  Eigen::ArrayXd e(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.position(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double x = p[a] * g.spacing(a) - 0.5 * g.length[a];
      r2 += x * x;
    }
    e(static_cast<Eigen::Index>(i)) = std::exp(-r2 / (2.0 * radius * radius));
  }
  return e;
}

}  // namespace

SpectralField random_band_limited(const BoxGrid& grid, int components, std::uint64_t seed, double k_lo,
                                  double k_hi, double target_norm, double m) {
  if (!(k_hi >= k_lo) || k_lo < 0.0) throw Error("random_band_limited: invalid band");
  if (target_norm < 0.0) throw Error("random_band_limited: target norm must be nonnegative");
  const WavenumberTable table(grid);
  SpectralField f(grid, components);
  GaussianSource gauss(seed);
  for (int c = 0; c < components; ++c)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double re = gauss.next();
      const double im = gauss.next();
      const double k = std::sqrt(table.k2(row));
      if (table.keep(row) != 0.0 && k >= k_lo && k <= k_hi) f.coeffs()(row, c) = Complex(re, im);
    }
  f.symmetrize();
  const double norm = sobolev_norm(f, m);
  if (norm == 0.0) {
    if (target_norm > 0.0) throw Error("random_band_limited: band contains no lattice modes");
    return f;
  }
  f *= target_norm / norm;
  return f;
}

SpectralField localized_random(const BoxGrid& grid, int components, std::uint64_t seed, double k_lo,
                               double k_hi, double radius, double amplitude) {
  if (!(radius > 0.0)) throw Error("localized_random: radius must be positive");
  const SpectralField carrier = random_band_limited(grid, components, seed, k_lo, k_hi, 1.0);
  const FourierTransform fft(grid);
  PhysicalField x = fft.to_physical(carrier);
  x.colwise() *= envelope(grid, radius);
  SpectralField f = dealias(fft.to_spectral(x));
  const double s = sup_norm(f);
  if (s > 0.0) f *= amplitude / s;
  return f;
}

SpectralField gaussian_bump(const BoxGrid& grid, double amplitude, double width) {
  const FourierTransform fft(grid);
  PhysicalField x(static_cast<Eigen::Index>(grid.size()), 1);
  x.col(0) = amplitude * envelope(grid, width);
  return fft.to_spectral(x);
}

SpectralField geostrophic_state(const SpectralField& a, double nu) {
  if (a.components() != 1 || a.grid().dim != 2) throw Error("geostrophic_state: expects a 2D scalar");
  if (!(nu > 0.0)) throw Error("geostrophic_state: nu must be positive");
  return SpectralField::stack(a, (1.0 / nu) * grad_perp(a));
}

void remove_vertical_mean(SpectralField& f) {
  const BoxGrid& g = f.grid();
  if (g.dim != 3) throw Error("remove_vertical_mean: 3D fields only");
  for (int i0 = 0; i0 < g.n[0]; ++i0)
    for (int i1 = 0; i1 < g.n[1]; ++i1) f.coeffs().row(static_cast<Eigen::Index>(g.flat_index(i0, i1, 0))).setZero();
}

}  // namespace spqg
