#pragma once

#include <cstdint>

#include "spqg/spectral_field.hpp"

namespace spqg {

/// Real random field whose spectrum is supported on k_lo <= |xi| <= k_hi
/// (and inside the 2/3 band), with independent Gaussian coefficients.
/// Scaled to the requested H^m norm. Same seed, same bits.
SpectralField random_band_limited(const BoxGrid& grid, int components, std::uint64_t seed, double k_lo,
                                  double k_hi, double target_norm, double m = 0.0);

/// Random band-limited field multiplied by a Gaussian envelope
/// exp(-|x - c|^2 / (2 radius^2)) centred in the box, then dealiased and
/// rescaled so that its sup norm equals amplitude.
SpectralField localized_random(const BoxGrid& grid, int components, std::uint64_t seed, double k_lo,
                               double k_hi, double radius, double amplitude);

/// amplitude * exp(-|x - c|^2 / (2 width^2)) with c the box centre.
SpectralField gaussian_bump(const BoxGrid& grid, double amplitude, double width);

/// 2D state (a, w1, w2) in geostrophic balance: w = grad_perp(a) / nu.
SpectralField geostrophic_state(const SpectralField& a, double nu);

/// Remove the xi_3 = 0 plane (the x3-average) from every component.
void remove_vertical_mean(SpectralField& f);

}  // namespace spqg
