#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spqg/pseudo_spectral.hpp"
#include "spqg/wave_algebra.hpp"

namespace spqg {

/// Intermediate-system state: components (a, w1, w2, w3). The first three
/// feel the large operator, w3 is passively advected.
struct State2D {
  SpectralField fields;
  double time = 0.0;

  static State2D zero(const BoxGrid& grid);
  /// Assemble from W = (a, w1, w2) and a scalar w3.
  static State2D from_parts(const SpectralField& w, const SpectralField& w3, double time = 0.0);

  SpectralField a() const { return fields.slice(0, 1); }
  SpectralField wh() const { return fields.slice(1, 2); }
  SpectralField w3() const { return fields.slice(3, 1); }
  /// (a, w1, w2).
  SpectralField wave_part() const { return fields.slice(0, 3); }
};

struct SolverConfig {
  double dt = 1e-2;
  double t_final = 1.0;
  bool dealias = true;
  int snapshot_stride = 1;
  double cfl = 0.5;
  /// Sobolev index whose sup over time is reported (the H^{m+3} bound).
  double monitor_index = 3.0;
  double blowup_factor = 1e6;
  /// Off: pure linear flow, for testing the integrating factor.
  bool nonlinear = true;
  /// Off: snapshots go to the observer only.
  bool keep_snapshots = true;

  void validate() const;
};
using SolverConfig2D = SolverConfig;

enum class RunStatus { Completed, NonFinite, BlowUp };
std::string to_string(RunStatus s);

struct Trajectory2D {
  std::vector<State2D> snapshots;
  double snapshot_interval = 0.0;
  double initial_norm = 0.0;
  double sup_norm = 0.0;  // sup over snapshots of the monitored H^s norm
  int steps = 0;
  int substeps = 0;  // total IF-RK4 steps after CFL subdivision
  RunStatus status = RunStatus::Completed;
  std::string message;

  bool ok() const { return status == RunStatus::Completed; }
};

/// Everything the 2D right-hand side needs for one grid.
class Intermediate2D {
 public:
  Intermediate2D(const BoxGrid& grid, const PhysicalParams& params);

  const BoxGrid& grid() const { return basis_.grid(); }
  const PhysicalParams& params() const { return params_; }
  const WaveBasis& basis() const { return basis_; }
  SpectralWorkspace& workspace() const { return *ws_; }

  /// -N(W) for W = (a, w1, w2) or (a, w1, w2, w3); w3 gets -w.grad w3.
  SpectralField nonlinear_rhs(const SpectralField& w) const;
  /// Largest pointwise |w_h|.
  double max_speed(const SpectralField& w) const;

 private:
  PhysicalParams params_;
  WaveBasis basis_;
  std::unique_ptr<SpectralWorkspace> ws_;
};

/// -(w.grad a + gbar a div w, (w.grad) w + gbar a grad a), dealiased.
SpectralField nonlinear_rhs_2d(const SpectralField& w, const PhysicalParams& params);

/// One classical RK4 step of ds/dt = -w_h.grad s with frozen w_h.
SpectralField advect_scalar(const SpectralField& s, const SpectralField& wh, double dt);

/// One integrating-factor RK4 step of length dt in place. The propagator must
/// be built for dt/2.
void step_if_rk4(SpectralField& w, double dt, const Propagator& half_step,
                 const std::function<SpectralField(const SpectralField&, double)>& rhs, double t);

void step_if_rk4_2d(State2D& state, double dt, const Intermediate2D& system, bool nonlinear = true);

using Observer2D = std::function<void(const State2D&)>;

/// Integrates to t_final with steps of config.dt, each split into equal
/// substeps when the advective CFL bound would be exceeded. Snapshots every
/// snapshot_stride steps, including t = 0 and t_final. The observer, if set,
/// sees every snapshot as it is produced.
Trajectory2D solve_intermediate(const State2D& initial, const SolverConfig& config, const PhysicalParams& params,
                                const Observer2D& observer = {});
Trajectory2D solve_intermediate(const State2D& initial, const SolverConfig& config, const Intermediate2D& system,
                                const Observer2D& observer = {});

}  // namespace spqg
