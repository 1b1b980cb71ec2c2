#pragma once

#include <cmath>

#include "spqg/initial_data.hpp"
#include "spqg/norms.hpp"

namespace testing {

using namespace spqg;

inline double rel_l2(const SpectralField& a, const SpectralField& b) {
  const double nb = sobolev_norm(b, 0.0);
  const double d = sobolev_norm(a - b, 0.0);
  return nb > 0.0 ? d / nb : d;
}

inline SpectralField random_field(const BoxGrid& g, int comps, std::uint64_t seed, double k_hi = 1e9) {
  return random_band_limited(g, comps, seed, 0.0, std::min(k_hi, g.max_wavenumber()), 1.0);
}

// Field holding the real mode cos(2 pi (j0 x + j1 y)/L) on component c.
inline SpectralField cos_mode(const BoxGrid& g, int comps, int c, int j0, int j1, double amp = 1.0) {
  SpectralField f(g, comps);
  const double n = static_cast<double>(g.size());
  const auto w = [&](int j, int axis) { return j >= 0 ? j : g.n[axis] + j; };
  const std::size_t p = g.flat_index(w(j0, 0), w(j1, 1), 0);
  const std::size_t m = g.flat_index(w(-j0, 0), w(-j1, 1), 0);
  f.coeffs()(static_cast<Eigen::Index>(p), c) += 0.5 * amp * n;
  f.coeffs()(static_cast<Eigen::Index>(m), c) += 0.5 * amp * n;
  return f;
}

}  // namespace testing
