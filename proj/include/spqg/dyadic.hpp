#pragma once

#include "spqg/spectral_field.hpp"

namespace spqg {

/// Radial Littlewood-Paley profile.
///
/// Built from the bump chi(s) = exp(-1/(1-s^2)) placed on log2|xi| so that its
/// support is the open annulus 3/4 < |xi| < 8/3, then divided by the sum of
/// all its dyadic dilates. Hence phi_k(xi) = phi(2^-k xi) sums to one for
/// every xi != 0. The same radial profile serves the 2D and 3D ladders.
namespace dyadic_profile {
inline constexpr double kInner = 0.75;
inline constexpr double kOuter = 8.0 / 3.0;

double bump(double radius);
double phi(double radius);
/// phi_k(|xi|) = phi(2^-k |xi|).
double phi_k(int k, double radius);
}  // namespace dyadic_profile

/// Range of dyadic indices with a nonzero block on a grid.
struct DyadicLadder {
  int k_min = 0;
  int k_max = -1;

  static DyadicLadder covering(const BoxGrid& grid);
  int count() const { return k_max - k_min + 1; }
  bool contains(int k) const { return k >= k_min && k <= k_max; }
};

/// Delta_k f = phi_k(D) f. Out-of-ladder k yields a zero field.
SpectralField dyadic_block(const SpectralField& f, int k);

}  // namespace spqg
