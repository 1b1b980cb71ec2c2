#pragma once

#include <cstdint>
#include <vector>

#include "spqg/norms.hpp"
#include "spqg/scaling_fit.hpp"
#include "spqg/wave_algebra.hpp"

namespace spqg {

/// 1 if k <= log2(nu), else 2^(3k).
double mk(int k, double nu);

/// 2 <= q, r <= inf, 1/q + 1/r <= 1/2, (q, r) != (2, inf).
bool admissible(double q, double r);

/// A radial profile f with Delta_k f = f on a 2D grid, evolved by
/// exp(i (gbar t/delta) p(D)), p = sqrt(nu^2 + |eta|^2).
struct DispersionProbe {
  int k = 0;
  double nu = 1.0;
  double delta = 0.1;
  double gamma_bar = 0.5;
  SpectralField profile;
  double t_max = 0.0;
  int padding = 2;
  double profile_l1 = 0.0;

  /// Smooth radial bump on the annulus (4/3) 2^k < |eta| < (3/2) 2^k, where
  /// phi_k is identically one. t_max defaults to the wrap-around bound.
  static DispersionProbe make(int k, const PhysicalParams& params, const BoxGrid& grid, double t_max = -1.0);

  /// 0.4 L delta / gbar with L the shortest box side.
  double wrap_time() const;
  /// Phase parameter gbar (t / delta) of the evolution.
  double theta(double t) const { return gamma_bar * (t / delta); }
  SpectralField evolve(double t) const;
};

/// ||exp(i theta p(D)) f||_inf / ||f||_1 with zero padding; t must lie in [0, t_max].
double kernel_supnorm(const DispersionProbe& probe, double t);

struct EnvelopeFit {
  std::vector<double> times;
  std::vector<double> values;
  ScalingFit fit;  // over the local maxima used
  std::size_t maxima = 0;
};

/// kernel_supnorm sampled log-uniformly on [t_max/10, t_max]; slope of the
/// local maxima in log-log (all samples when fewer than three maxima exist).
EnvelopeFit kernel_envelope(const DispersionProbe& probe, int samples);

struct StrichartzMeasure {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double t_max = 0.0;
};

/// L^q(0, t_max; L^r) norm of the evolved profile over
/// 2^{2k(1/2 - 1/r)} (M_k delta)^{1/q} ||f||_2, for r in {2, inf}.
StrichartzMeasure strichartz_ratio(const DispersionProbe& probe, double q, double r, int samples = 65);

/// 2^{3(1/2 - 1/r - 1/q)k} when 2^k <= gbar nu, else 2^{3(1/2 - 1/r)k}.
double block_prefactor(int k, double gbar_nu, double q, double r);

struct BlockDecay {
  ScalingFit fit;  // norm versus delta
  std::vector<double> deltas;
  std::vector<double> norms;
  double predicted_exponent = 0.0;
  double prefactor = 0.0;
};

/// ||Delta_k exp(-(gbar t/delta) L) f||_{L^q(0,T; L^r)} over a delta sweep
/// for a seeded 3D field localized within `radius` of the box centre, with its
/// x3-average removed and L^2 norm `amplitude`. T must stay below the
/// wrap-around time of the smallest delta.
BlockDecay verify_3d_block_decay(int k, const PhysicalParams& params, const std::vector<double>& deltas, double q,
                                 double r, const BoxGrid& grid3, double t_final, int samples,
                                 std::uint64_t seed = 1, double amplitude = 1.0, double radius = 2.0);

}  // namespace spqg
