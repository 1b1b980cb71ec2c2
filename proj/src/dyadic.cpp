#include "spqg/dyadic.hpp"

#include <cmath>

namespace spqg {

namespace dyadic_profile {

namespace {
const double kLogInner = std::log2(kInner);
const double kLogOuter = std::log2(kOuter);

double bump_log(double x) {
  const double s = 2.0 * (x - kLogInner) / (kLogOuter - kLogInner) - 1.0;
  if (!(std::abs(s) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}
}  // namespace

double bump(double radius) {
  if (!(radius > 0.0)) return 0.0;
  return bump_log(std::log2(radius));
}

double phi(double radius) {
  if (!(radius > 0.0)) return 0.0;
  const double x = std::log2(radius);
  const double top = bump_log(x);
  if (top == 0.0) return 0.0;
  // Dilates 2^-j overlapping x: x - j in (log2(3/4), log2(8/3)).
  double sum = 0.0;
  const int j_lo = static_cast<int>(std::floor(x - kLogOuter));
  const int j_hi = static_cast<int>(std::ceil(x - kLogInner));
  for (int j = j_lo; j <= j_hi; ++j) sum += bump_log(x - j);
  return top / sum;
}

double phi_k(int k, double radius) { return phi(std::ldexp(radius, -k)); }

}  // namespace dyadic_profile

DyadicLadder DyadicLadder::covering(const BoxGrid& grid) {
  // phi_k(xi) != 0 iff (3/4) 2^k < |xi| < (8/3) 2^k.
  DyadicLadder ladder;
  ladder.k_min = static_cast<int>(std::floor(std::log2(grid.min_wavenumber() / dyadic_profile::kOuter)));
  ladder.k_max = static_cast<int>(std::ceil(std::log2(grid.max_wavenumber() / dyadic_profile::kInner)));
  return ladder;
}

SpectralField dyadic_block(const SpectralField& f, int k) {
  const BoxGrid& g = f.grid();
  SpectralField out(g, f.components());
  if (!DyadicLadder::covering(g).contains(k)) return out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = dyadic_profile::phi_k(k, g.wavevector(i).norm());
    if (w != 0.0) {
      const auto row = static_cast<Eigen::Index>(i);
      out.coeffs().row(row) = w * f.coeffs().row(row);
    }
  }
  return out;
}

}  // namespace spqg
