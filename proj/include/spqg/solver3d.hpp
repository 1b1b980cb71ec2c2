#pragma once

#include <memory>
#include <vector>

#include "spqg/solver2d.hpp"

namespace spqg {

/// Perturbation V = (theta, v1, v2, v3) on a 3D grid.
struct State3D {
  SpectralField fields;
  double time = 0.0;

  static State3D zero(const BoxGrid& grid);
  SpectralField theta() const { return fields.slice(0, 1); }
  SpectralField v() const { return fields.slice(1, 3); }
};

/// Embed a 2D field as an x3-independent 3D field: the spectrum is resampled
/// onto the horizontal lattice of grid3 and placed on the xi_3 = 0 plane.
SpectralField extend_2d_to_3d(const SpectralField& f2, const BoxGrid& grid3);

/// Horizontal 2D grid sharing the first two axes of a 3D grid.
BoxGrid horizontal_grid(const BoxGrid& grid3);

/// Physical samples of the 2D solution (and its horizontal derivatives) on the
/// horizontal lattice of the 3D grid, one column per quantity.
struct ForcingSample {
  enum Column { A, W1, W2, W3, Ax, Ay, W1x, W1y, W2x, W2y, W3x, W3y, Count };
  Eigen::ArrayXXd columns;  // horizontal points x Count
};

/// 2D trajectory as a dense-in-time forcing. Between snapshots the state is
/// interpolated by cubic Hermite in the interaction variable
/// Z(tau) = exp(+(gbar tau/delta) A) W(t_i + tau), whose derivative is the
/// rotated nonlinear term, then rotated back; at snapshot times the stored
/// state is returned unchanged. Immutable after construction.
class ForcingContext {
 public:
  /// Empty context: G(V) vanishes for every time.
  static ForcingContext zero(const BoxGrid& grid3);
  ForcingContext(const Trajectory2D& trajectory, const PhysicalParams& params, const BoxGrid& grid3);

  bool is_zero() const { return snapshots_.empty(); }
  double t_begin() const;
  double t_end() const;
  const BoxGrid& grid3() const { return grid3_; }

  /// (a, w1, w2, w3) on the horizontal lattice at time t.
  SpectralField state_at(double t) const;
  ForcingSample sample(double t) const;

 private:
  explicit ForcingContext(const BoxGrid& grid3);

  BoxGrid grid3_;
  BoxGrid horizontal_;
  PhysicalParams params_;
  std::vector<double> times_;
  std::vector<SpectralField> snapshots_;  // on the horizontal lattice
  std::vector<SpectralField> rates_;      // nonlinear term at each snapshot
  std::shared_ptr<const WaveBasis> basis_;
};

/// Right-hand side pieces of the perturbed system on one 3D grid.
class Perturbed3D {
 public:
  Perturbed3D(const BoxGrid& grid3, const PhysicalParams& params);

  const BoxGrid& grid() const { return basis_.grid(); }
  const PhysicalParams& params() const { return params_; }
  const WaveBasis& basis() const { return basis_; }

  /// -(v.grad theta + gbar theta div v, (v.grad) v + gbar theta grad theta).
  SpectralField nonlinear_rhs(const SpectralField& v) const;
  /// G(V) for the given forcing sample.
  SpectralField coupling_rhs(const SpectralField& v, const ForcingSample& f) const;
  /// -N(V) + G(V); a null sample means no forcing.
  SpectralField total_rhs(const SpectralField& v, const ForcingSample* f) const;
  double max_speed(const SpectralField& v) const;

 private:
  PhysicalParams params_;
  WaveBasis basis_;
  std::unique_ptr<SpectralWorkspace> ws_;
};

SpectralField nonlinear_rhs_3d(const SpectralField& v, const PhysicalParams& params);
SpectralField coupling_rhs(const SpectralField& v, const ForcingContext& ctx, double t, const PhysicalParams& params);

struct Trajectory3D {
  std::vector<State3D> snapshots;
  double snapshot_interval = 0.0;
  double initial_norm = 0.0;
  double sup_norm = 0.0;
  int steps = 0;
  int substeps = 0;
  RunStatus status = RunStatus::Completed;
  std::string message;
  bool ok() const { return status == RunStatus::Completed; }
};

using Observer3D = std::function<void(const State3D&)>;

/// Integrating-factor RK4 for V with the 3D propagator and forcing G(V).
/// The forcing is sampled at the RK4 stage times t, t + h/2, t + h.
Trajectory3D solve_perturbed(const State3D& initial, const ForcingContext& ctx, const SolverConfig& config,
                             const PhysicalParams& params, const Observer3D& observer = {});

/// U = extension of (a, w1, w2, w3) + (theta, v); times must agree within dt/2.
SpectralField reconstruct_full(const State2D& two_d, const State3D& three_d, double dt);

/// rho = (gbar (1 + delta b))^(1/gbar), evaluated pointwise.
SpectralField reconstruct_density(const SpectralField& b, const PhysicalParams& params);

}  // namespace spqg
