#include "spqg/qg_solver.hpp"

#include <cmath>
#include <sstream>

#include "spqg/multiplier.hpp"

namespace spqg {

QGState init_from_data(const SpectralField& b0, const SpectralField& uh0, const SpectralField& u30, double nu) {
  if (b0.components() != 1 || uh0.components() != 2 || u30.components() != 1)
    throw Error("init_from_data: expects scalar b0, 2-vector uh0, scalar u30");
  if (!(b0.grid() == uh0.grid()) || !(b0.grid() == u30.grid()) || b0.grid().dim != 2)
    throw Error("init_from_data: fields must share a 2D grid");
  return QGState{curl_2d(uh0) - nu * b0, u30, 0.0};
}

Geostrophic invert_pv(const SpectralField& q, double nu) {
  if (q.components() != 1 || q.grid().dim != 2) throw Error("invert_pv: expects a 2D scalar");
  if (!(nu > 0.0)) throw Error("invert_pv: nu must be positive");
  const WavenumberTable table(q.grid());
  SpectralField b(q.grid(), 1);
  b.component(0) = (q.component(0).array() * (-nu / (nu * nu + table.k2))).matrix();
  SpectralField uh = (1.0 / nu) * grad_perp(b);
  return {std::move(b), std::move(uh)};
}

QGSystem::QGSystem(const BoxGrid& grid, double nu) : nu_(nu), ws_(std::make_unique<SpectralWorkspace>(grid)) {
  if (grid.dim != 2) throw Error("QGSystem: 2D grid required");
  if (!(nu > 0.0)) throw Error("QGSystem: nu must be positive");
  inverse_ = -nu / (nu * nu + ws_->table().k2);
}

double QGSystem::max_speed(const SpectralField& q) const {
  // u_h = grad_perp(b) / nu, so |u_h| = |grad b| / nu.
  const Eigen::VectorXcd b = (q.component(0).array() * inverse_).matrix();
  const Eigen::ArrayXd bx = ws_->derivative_values(b, 0);
  const Eigen::ArrayXd by = ws_->derivative_values(b, 1);
  return (bx.square() + by.square()).sqrt().maxCoeff() / nu_;
}

SpectralField QGSystem::rhs(const SpectralField& qu3) const {
  if (qu3.components() != 2) throw Error("QGSystem::rhs: expects stacked (q, u3)");
  const Eigen::VectorXcd b = (qu3.component(0).array() * inverse_).matrix();
  const Eigen::ArrayXd u = -ws_->derivative_values(b, 1) / nu_;
  const Eigen::ArrayXd v = ws_->derivative_values(b, 0) / nu_;
  SpectralField out(qu3.grid(), 2);
  for (int c = 0; c < 2; ++c) {
    const Eigen::ArrayXd sx = ws_->derivative_values(qu3.component(c), 0);
    const Eigen::ArrayXd sy = ws_->derivative_values(qu3.component(c), 1);
    out.component(c) = ws_->dealiased_spectrum(-(u * sx + v * sy));
  }
  return out;
}

namespace {

void rk4(SpectralField& y, double h, const QGSystem& system) {
  const SpectralField k1 = system.rhs(y);
  const SpectralField k2 = system.rhs(y + (0.5 * h) * k1);
  const SpectralField k3 = system.rhs(y + (0.5 * h) * k2);
  const SpectralField k4 = system.rhs(y + h * k3);
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

void step_qg(QGState& state, double dt, const QGSystem& system) {
  SpectralField y = SpectralField::stack(state.q, state.u3);
  rk4(y, dt, system);
  state.q = y.slice(0, 1);
  state.u3 = y.slice(1, 1);
  state.time += dt;
}

QGTrajectory solve_qg(const QGState& initial, const SolverConfig& config, double nu, const ObserverQG& observer) {
  config.validate();
  const QGSystem system(initial.q.grid(), nu);
  const long steps = std::max(1L, std::lround(std::ceil(config.t_final / config.dt - 1e-9)));
  const double h = config.t_final / static_cast<double>(steps);
  const BoxGrid& g = system.grid();
  const double dx = std::min(g.spacing(0), g.spacing(1));

  QGTrajectory traj;
  traj.snapshot_interval = h * config.snapshot_stride;
  SpectralField y = SpectralField::stack(initial.q, initial.u3);
  if (config.dealias) dealias_inplace(y);

  const auto record = [&](double t) {
    QGState s{y.slice(0, 1), y.slice(1, 1), t};
    if (observer) observer(s);
    if (config.keep_snapshots) traj.snapshots.push_back(std::move(s));
  };
  record(0.0);

  for (long n = 0; n < steps; ++n) {
    const double speed = system.max_speed(y.slice(0, 1));
    const int sub = speed * h > config.cfl * dx ? static_cast<int>(std::ceil(speed * h / (config.cfl * dx))) : 1;
    SpectralField next = y;
    for (int j = 0; j < sub; ++j) rk4(next, h / sub, system);
    traj.substeps += sub;
    if (!next.is_finite()) {
      std::ostringstream os;
      os << "non-finite PV in step " << n + 1 << "; last valid state kept";
      traj.status = RunStatus::NonFinite;
      traj.message = os.str();
      break;
    }
    y = std::move(next);
    traj.steps = static_cast<int>(n + 1);
    if ((n + 1) % config.snapshot_stride == 0 || n + 1 == steps) record(static_cast<double>(n + 1) * h);
  }
  return traj;
}

}  // namespace spqg
