#pragma once

#include <limits>
#include <span>
#include <vector>

#include "spqg/spectral_field.hpp"

namespace spqg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponents of a space-time norm: time q, space r, regularity m, dyadic sum sigma.
struct NormSpec {
  double q = 2.0;
  double r = 2.0;
  double m = 0.0;
  double sigma = 2.0;

  void validate() const;
};

/// Inhomogeneous Sobolev norm with weight (1+|xi|^2)^m, summed over components.
/// m = 0 gives the L^2 norm on the box (Plancherel with volume normalization).
double sobolev_norm(const SpectralField& f, double m);

/// Grid maximum of the pointwise Euclidean norm over components, optionally
/// after spectral zero padding by an integer factor.
double sup_norm(const SpectralField& f, int padding = 1);
/// Riemann sum of the pointwise Euclidean norm (exact quadrature for the
/// trigonometric interpolant only when the integrand is band-limited).
double l1_norm(const SpectralField& f, int padding = 1);
/// L^r norm for r in {2, inf}.
double lebesgue_norm(const SpectralField& f, double r, int padding = 1);

/// Homogeneous Besov semi-norm over the covering dyadic ladder.
double besov_norm(const SpectralField& f, const NormSpec& spec, int padding = 1);

/// Chemin-Lerner norm: the L^q-in-time norm is taken inside the dyadic sum.
/// Snapshots are uniformly spaced by dt.
double chemin_lerner_norm(std::span<const SpectralField> snapshots, double dt, const NormSpec& spec,
                          int padding = 1);

/// Plain L^q(0,T; Besov) norm: Besov norm per snapshot, then time norm.
double lebesgue_besov_norm(std::span<const SpectralField> snapshots, double dt, const NormSpec& spec,
                           int padding = 1);

/// Trapezoid quadrature of v^q then q-th root; maximum for q = inf.
double time_lebesgue_norm(std::span<const double> values, double dt, double q);

}  // namespace spqg
