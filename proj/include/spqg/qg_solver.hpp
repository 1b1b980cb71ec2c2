#pragma once

#include <functional>
#include <vector>

#include "spqg/solver2d.hpp"

namespace spqg {

/// Limit-system state. q = curl u_h - nu b is prognostic; (b, u_h) follow
/// from invert_pv.
struct QGState {
  SpectralField q;
  SpectralField u3;
  double time = 0.0;
};

struct Geostrophic {
  SpectralField b;
  SpectralField uh;
};

/// q(0) = curl uh0 - nu b0, u3(0) = u30.
QGState init_from_data(const SpectralField& b0, const SpectralField& uh0, const SpectralField& u30, double nu);

/// b = -nu (nu^2 - Laplacian)^-1 q, u_h = grad_perp(b) / nu.
Geostrophic invert_pv(const SpectralField& q, double nu);

/// Time derivatives of (q, u3) under the inverted velocity.
class QGSystem {
 public:
  QGSystem(const BoxGrid& grid, double nu);
  const BoxGrid& grid() const { return ws_->grid(); }
  double nu() const { return nu_; }
  /// Stacked (q, u3) -> stacked (-u.grad q, -u.grad u3).
  SpectralField rhs(const SpectralField& qu3) const;
  double max_speed(const SpectralField& q) const;

 private:
  double nu_;
  Eigen::ArrayXd inverse_;  // -nu / (nu^2 + |eta|^2)
  std::unique_ptr<SpectralWorkspace> ws_;
};

void step_qg(QGState& state, double dt, const QGSystem& system);

struct QGTrajectory {
  std::vector<QGState> snapshots;
  double snapshot_interval = 0.0;
  int steps = 0;
  int substeps = 0;
  RunStatus status = RunStatus::Completed;
  std::string message;
  bool ok() const { return status == RunStatus::Completed; }
};

using ObserverQG = std::function<void(const QGState&)>;

/// Same step, CFL and snapshot policy as solve_intermediate.
QGTrajectory solve_qg(const QGState& initial, const SolverConfig& config, double nu,
                      const ObserverQG& observer = {});

}  // namespace spqg
