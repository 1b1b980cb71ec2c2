#include "spqg/solver2d.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "spqg/multiplier.hpp"
#include "spqg/norms.hpp"

namespace spqg {

namespace {

SpectralField rhs_kernel(const SpectralWorkspace& ws, double gbar, const SpectralField& w) {
  const int comps = w.components();
  if (comps != 3 && comps != 4) throw Error("nonlinear_rhs_2d: expects (a, w1, w2[, w3])");
  if (!(w.grid() == ws.grid())) throw Error("nonlinear_rhs_2d: grid mismatch");
  const Eigen::ArrayXd a = ws.values(w.component(0));
  const Eigen::ArrayXd u = ws.values(w.component(1));
  const Eigen::ArrayXd v = ws.values(w.component(2));
  const Eigen::ArrayXd ax = ws.derivative_values(w.component(0), 0);
  const Eigen::ArrayXd ay = ws.derivative_values(w.component(0), 1);
  const Eigen::ArrayXd ux = ws.derivative_values(w.component(1), 0);
  const Eigen::ArrayXd uy = ws.derivative_values(w.component(1), 1);
  const Eigen::ArrayXd vx = ws.derivative_values(w.component(2), 0);
  const Eigen::ArrayXd vy = ws.derivative_values(w.component(2), 1);

  SpectralField out(w.grid(), comps);
  out.component(0) = ws.dealiased_spectrum(-(u * ax + v * ay + gbar * a * (ux + vy)));
  out.component(1) = ws.dealiased_spectrum(-(u * ux + v * uy + gbar * a * ax));
  out.component(2) = ws.dealiased_spectrum(-(u * vx + v * vy + gbar * a * ay));
  if (comps == 4) {
    const Eigen::ArrayXd sx = ws.derivative_values(w.component(3), 0);
    const Eigen::ArrayXd sy = ws.derivative_values(w.component(3), 1);
    out.component(3) = ws.dealiased_spectrum(-(u * sx + v * sy));
  }
  return out;
}

SpectralField transport_rhs(const SpectralWorkspace& ws, const Eigen::ArrayXd& u, const Eigen::ArrayXd& v,
                            const SpectralField& s) {
  SpectralField out(s.grid(), 1);
  const Eigen::ArrayXd sx = ws.derivative_values(s.component(0), 0);
  const Eigen::ArrayXd sy = ws.derivative_values(s.component(0), 1);
  out.component(0) = ws.dealiased_spectrum(-(u * sx + v * sy));
  return out;
}

}  // namespace

State2D State2D::zero(const BoxGrid& grid) {
  if (grid.dim != 2) throw Error("State2D: 2D grid required");
  return State2D{SpectralField(grid, 4), 0.0};
}

State2D State2D::from_parts(const SpectralField& w, const SpectralField& w3, double time) {
  if (w.components() != 3 || w3.components() != 1) throw Error("State2D::from_parts: expects (a, w1, w2) and w3");
  if (w.grid().dim != 2) throw Error("State2D: 2D grid required");
  return State2D{SpectralField::stack(w, w3), time};
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !(t_final > 0.0)) throw Error("solver config: dt and t_final must be positive");
  if (dt > t_final * (1.0 + 1e-12)) throw Error("solver config: dt exceeds t_final");
  if (snapshot_stride < 1) throw Error("solver config: snapshot_stride must be >= 1");
  if (!(cfl > 0.0)) throw Error("solver config: cfl must be positive");
  if (!(blowup_factor > 1.0)) throw Error("solver config: blowup_factor must exceed 1");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::NonFinite:
      return "non-finite";
    case RunStatus::BlowUp:
      return "blow-up";
  }
  return "unknown";
}

Intermediate2D::Intermediate2D(const BoxGrid& grid, const PhysicalParams& params)
    : params_(params), basis_(grid, params.nu), ws_(std::make_unique<SpectralWorkspace>(grid)) {
  if (grid.dim != 2) throw Error("Intermediate2D: 2D grid required");
}

SpectralField Intermediate2D::nonlinear_rhs(const SpectralField& w) const {
  return rhs_kernel(*ws_, params_.gamma_bar, w);
}

double Intermediate2D::max_speed(const SpectralField& w) const {
  const Eigen::ArrayXd u = ws_->values(w.component(1));
  const Eigen::ArrayXd v = ws_->values(w.component(2));
  return (u.square() + v.square()).sqrt().maxCoeff();
}

SpectralField nonlinear_rhs_2d(const SpectralField& w, const PhysicalParams& params) {
  const SpectralWorkspace ws(w.grid());
  return rhs_kernel(ws, params.gamma_bar, w);
}

SpectralField advect_scalar(const SpectralField& s, const SpectralField& wh, double dt) {
  if (s.components() != 1 || wh.components() != 2) throw Error("advect_scalar: expects scalar s and 2-vector w_h");
  if (!(s.grid() == wh.grid()) || s.grid().dim != 2) throw Error("advect_scalar: fields must share a 2D grid");
  const SpectralWorkspace ws(s.grid());
  const Eigen::ArrayXd u = ws.values(wh.component(0));
  const Eigen::ArrayXd v = ws.values(wh.component(1));
  const SpectralField k1 = transport_rhs(ws, u, v, s);
  const SpectralField k2 = transport_rhs(ws, u, v, s + (0.5 * dt) * k1);
  const SpectralField k3 = transport_rhs(ws, u, v, s + (0.5 * dt) * k2);
  const SpectralField k4 = transport_rhs(ws, u, v, s + dt * k3);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void step_if_rk4(SpectralField& w, double dt, const Propagator& half_step,
                 const std::function<SpectralField(const SpectralField&, double)>& rhs, double t) {
  const double h = dt;
  const SpectralField k1 = rhs(w, t);

  SpectralField wh = w;
  half_step.apply(wh);

  SpectralField ek1 = k1;
  half_step.apply(ek1);
  const SpectralField r2 = rhs(wh + (0.5 * h) * ek1, t + 0.5 * h);
  const SpectralField r3 = rhs(wh + (0.5 * h) * r2, t + 0.5 * h);

  SpectralField u4 = wh + h * r3;
  half_step.apply(u4);
  const SpectralField r4 = rhs(u4, t + h);

  SpectralField acc = w + (h / 6.0) * k1;
  half_step.apply(acc);
  acc += (h / 3.0) * (r2 + r3);
  half_step.apply(acc);
  acc += (h / 6.0) * r4;
  w = std::move(acc);
}

void step_if_rk4_2d(State2D& state, double dt, const Intermediate2D& system, bool nonlinear) {
  const Propagator half(system.basis(), system.params(), 0.5 * dt);
  const auto rhs = [&](const SpectralField& f, double) {
    return nonlinear ? system.nonlinear_rhs(f) : SpectralField(f.grid(), f.components());
  };
  step_if_rk4(state.fields, dt, half, rhs, state.time);
  state.time += dt;
}

Trajectory2D solve_intermediate(const State2D& initial, const SolverConfig& config, const PhysicalParams& params,
                                const Observer2D& observer) {
  const Intermediate2D system(initial.fields.grid(), params);
  return solve_intermediate(initial, config, system, observer);
}

Trajectory2D solve_intermediate(const State2D& initial, const SolverConfig& config, const Intermediate2D& system,
                                const Observer2D& observer) {
  config.validate();
  if (initial.fields.components() != 4) throw Error("solve_intermediate: state must have 4 components");
  if (!(initial.fields.grid() == system.grid())) throw Error("solve_intermediate: grid mismatch");

  const long steps = std::max(1L, std::lround(std::ceil(config.t_final / config.dt - 1e-9)));
  const double h = config.t_final / static_cast<double>(steps);
  const double dx = std::min(system.grid().spacing(0), system.grid().spacing(1));

  Trajectory2D traj;
  traj.snapshot_interval = h * config.snapshot_stride;

  State2D state = initial;
  if (config.dealias) dealias_inplace(state.fields);
  traj.initial_norm = sobolev_norm(state.fields, config.monitor_index);
  traj.sup_norm = traj.initial_norm;

  const auto record = [&](const State2D& s) {
    if (config.keep_snapshots) traj.snapshots.push_back(s);
    if (observer) observer(s);
  };
  record(state);

  std::map<int, Propagator> half_steps;
  const auto rhs = [&](const SpectralField& f, double) {
    return config.nonlinear ? system.nonlinear_rhs(f) : SpectralField(f.grid(), f.components());
  };

  for (long n = 0; n < steps; ++n) {
    int sub = 1;
    if (config.nonlinear) {
      const double speed = system.max_speed(state.fields);
      if (speed * h > config.cfl * dx) sub = static_cast<int>(std::ceil(speed * h / (config.cfl * dx)));
    }
    auto it = half_steps.find(sub);
    if (it == half_steps.end())
      it = half_steps.emplace(sub, Propagator(system.basis(), system.params(), 0.5 * h / sub)).first;

    SpectralField next = state.fields;
    const double t0 = static_cast<double>(n) * h;
    for (int j = 0; j < sub; ++j) step_if_rk4(next, h / sub, it->second, rhs, t0 + j * h / sub);
    traj.substeps += sub;

    if (!next.is_finite()) {
      std::ostringstream os;
      os << "non-finite state in step " << n + 1 << " (t = " << t0 << " -> " << t0 + h
         << "); last valid state kept";
      traj.status = RunStatus::NonFinite;
      traj.message = os.str();
      break;
    }
    state.fields = std::move(next);
    state.time = static_cast<double>(n + 1) * h;
    traj.steps = static_cast<int>(n + 1);

    const bool last = n + 1 == steps;
    if ((n + 1) % config.snapshot_stride == 0 || last) {
      const double norm = sobolev_norm(state.fields, config.monitor_index);
      traj.sup_norm = std::max(traj.sup_norm, norm);
      if (traj.initial_norm > 0.0 && norm > config.blowup_factor * traj.initial_norm) {
        std::ostringstream os;
        os << "H^" << config.monitor_index << " norm grew from " << traj.initial_norm << " to " << norm
           << " by t = " << state.time;
        traj.status = RunStatus::BlowUp;
        traj.message = os.str();
        record(state);
        break;
      }
      record(state);
    }
  }
  return traj;
}

}  // namespace spqg
