#include "spqg/solver3d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "spqg/multiplier.hpp"
#include "spqg/norms.hpp"

namespace spqg {

namespace {

Eigen::ArrayXd broadcast(const Eigen::ArrayXd& horizontal, int n2) {
  Eigen::ArrayXd out(horizontal.size() * n2);
  Eigen::Map<Eigen::ArrayXXd>(out.data(), n2, horizontal.size()).rowwise() = horizontal.transpose();
  return out;
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

State3D State3D::zero(const BoxGrid& grid) {
  if (grid.dim != 3) throw Error("State3D: 3D grid required");
  return State3D{SpectralField(grid, 4), 0.0};
}

BoxGrid horizontal_grid(const BoxGrid& grid3) {
  if (grid3.dim != 3) throw Error("horizontal_grid: 3D grid required");
  return BoxGrid::make(2, {grid3.n[0], grid3.n[1], 1}, {grid3.length[0], grid3.length[1], 1.0});
}

SpectralField extend_2d_to_3d(const SpectralField& f2, const BoxGrid& grid3) {
  if (f2.grid().dim != 2) throw Error("extend_2d_to_3d: source must be 2D");
  const BoxGrid h = horizontal_grid(grid3);
  if (f2.grid().length[0] != h.length[0] || f2.grid().length[1] != h.length[1])
    throw Error("extend_2d_to_3d: horizontal box lengths differ (" + f2.grid().describe() + " vs " +
                grid3.describe() + ")");
  const SpectralField src = f2.grid() == h ? f2 : resample(f2, h);
  SpectralField out(grid3, f2.components());
  const double scale = grid3.n[2];
  for (int i0 = 0; i0 < h.n[0]; ++i0)
    for (int i1 = 0; i1 < h.n[1]; ++i1)
      out.coeffs().row(static_cast<Eigen::Index>(grid3.flat_index(i0, i1, 0))) =
          scale * src.coeffs().row(static_cast<Eigen::Index>(h.flat_index(i0, i1, 0)));
  return out;
}

ForcingContext::ForcingContext(const BoxGrid& grid3) : grid3_(grid3), horizontal_(horizontal_grid(grid3)) {}

ForcingContext ForcingContext::zero(const BoxGrid& grid3) { return ForcingContext(grid3); }

ForcingContext::ForcingContext(const Trajectory2D& trajectory, const PhysicalParams& params, const BoxGrid& grid3)
    : ForcingContext(grid3) {
  if (trajectory.snapshots.empty()) throw Error("ForcingContext: empty trajectory");
  params_ = params;
  basis_ = std::make_shared<const WaveBasis>(horizontal_, params.nu);
  for (const State2D& s : trajectory.snapshots) {
    if (!times_.empty() && !(s.time > times_.back())) throw Error("ForcingContext: snapshot times must increase");
    if (s.fields.grid().length[0] != horizontal_.length[0] || s.fields.grid().length[1] != horizontal_.length[1])
      throw Error("ForcingContext: 2D box lengths differ from the 3D horizontal box");
    SpectralField w = s.fields.grid() == horizontal_ ? s.fields : resample(s.fields, horizontal_);
    times_.push_back(s.time);
    rates_.push_back(nonlinear_rhs_2d(w, params));
    snapshots_.push_back(std::move(w));
  }
}

double ForcingContext::t_begin() const { return times_.empty() ? -kInf : times_.front(); }
double ForcingContext::t_end() const { return times_.empty() ? kInf : times_.back(); }

SpectralField ForcingContext::state_at(double t) const {
  if (is_zero()) return SpectralField(horizontal_, 4);
  const double tol = 1e-9 * std::max(1.0, std::abs(t_end()));
  if (t < t_begin() - tol || t > t_end() + tol) {
    std::ostringstream os;
    os << "ForcingContext: time " << t << " outside [" << t_begin() << ", " << t_end() << "]";
    throw Error(os.str());
  }
  auto hi = std::lower_bound(times_.begin(), times_.end(), t);
  if (hi == times_.end()) return snapshots_.back();
  std::size_t j = static_cast<std::size_t>(hi - times_.begin());
  if (same_time(t, times_[j])) return snapshots_[j];
  if (j > 0 && same_time(t, times_[j - 1])) return snapshots_[j - 1];
  if (j == 0) return snapshots_.front();
  const std::size_t i = j - 1;
  const double span = times_[j] - times_[i];
  const double tau = t - times_[i];
  const double s = tau / span;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);

  const Propagator back(*basis_, params_, -span);
  SpectralField z1 = snapshots_[j];
  SpectralField r1 = rates_[j];
  back.apply(z1);
  back.apply(r1);
  SpectralField z = h00 * snapshots_[i] + (h10 * span) * rates_[i] + h01 * z1 + (h11 * span) * r1;
  Propagator(*basis_, params_, tau).apply(z);
  return z;
}

ForcingSample ForcingContext::sample(double t) const {
  ForcingSample out;
  out.columns = Eigen::ArrayXXd::Zero(static_cast<Eigen::Index>(horizontal_.size()), ForcingSample::Count);
  if (is_zero()) return out;
  const SpectralField w = state_at(t);
  const SpectralWorkspace ws(horizontal_);
  for (int c = 0; c < 4; ++c) {
    out.columns.col(ForcingSample::A + c) = ws.values(w.component(c));
    out.columns.col(ForcingSample::Ax + 2 * c) = ws.derivative_values(w.component(c), 0);
    out.columns.col(ForcingSample::Ax + 2 * c + 1) = ws.derivative_values(w.component(c), 1);
  }
  return out;
}

Perturbed3D::Perturbed3D(const BoxGrid& grid3, const PhysicalParams& params)
    : params_(params), basis_(grid3, params.nu), ws_(std::make_unique<SpectralWorkspace>(grid3)) {
  if (grid3.dim != 3) throw Error("Perturbed3D: 3D grid required");
}

SpectralField Perturbed3D::total_rhs(const SpectralField& v, const ForcingSample* f) const {
  return coupling_rhs(v, f ? *f : ForcingSample{}) + nonlinear_rhs(v);
}

SpectralField Perturbed3D::nonlinear_rhs(const SpectralField& v) const {
  if (v.components() != 4 || !(v.grid() == grid())) throw Error("nonlinear_rhs_3d: expects (theta, v) on the solver grid");
  const SpectralWorkspace& ws = *ws_;
  const double gbar = params_.gamma_bar;
  const Eigen::ArrayXd th = ws.values(v.component(0));
  std::array<Eigen::ArrayXd, 3> u, dth;
  for (int i = 0; i < 3; ++i) {
    u[i] = ws.values(v.component(1 + i));
    dth[i] = ws.derivative_values(v.component(0), i);
  }
  Eigen::ArrayXd div = Eigen::ArrayXd::Zero(th.size());
  std::array<Eigen::ArrayXd, 3> adv;  // (v.grad) v_i
  for (int i = 0; i < 3; ++i) {
    adv[i] = Eigen::ArrayXd::Zero(th.size());
    for (int j = 0; j < 3; ++j) {
      const Eigen::ArrayXd d = ws.derivative_values(v.component(1 + i), j);
      adv[i] += u[j] * d;
      if (i == j) div += d;
    }
  }
  SpectralField out(v.grid(), 4);
  out.component(0) = ws.dealiased_spectrum(-(u[0] * dth[0] + u[1] * dth[1] + u[2] * dth[2] + gbar * th * div));
  for (int i = 0; i < 3; ++i) out.component(1 + i) = ws.dealiased_spectrum(-(adv[i] + gbar * th * dth[i]));
  return out;
}

SpectralField Perturbed3D::coupling_rhs(const SpectralField& v, const ForcingSample& f) const {
  if (v.components() != 4 || !(v.grid() == grid())) throw Error("coupling_rhs: expects (theta, v) on the solver grid");
  SpectralField out(v.grid(), 4);
  if (f.columns.size() == 0 || (f.columns == 0.0).all()) return out;
  const SpectralWorkspace& ws = *ws_;
  const BoxGrid& g = grid();
  const double gbar = params_.gamma_bar;
  if (f.columns.rows() != static_cast<Eigen::Index>(g.n[0]) * g.n[1])
    throw Error("coupling_rhs: forcing sample does not match the horizontal lattice");
  const auto col = [&](int c) { return broadcast(f.columns.col(c), g.n[2]); };
  const Eigen::ArrayXd a = col(ForcingSample::A);
  const Eigen::ArrayXd ax = col(ForcingSample::Ax);
  const Eigen::ArrayXd ay = col(ForcingSample::Ay);
  const std::array<Eigen::ArrayXd, 3> w{col(ForcingSample::W1), col(ForcingSample::W2), col(ForcingSample::W3)};
  // dw_i/dx_j for j = 1, 2; x3 derivatives of 2D fields vanish.
  const std::array<std::array<Eigen::ArrayXd, 2>, 3> dw{
      std::array<Eigen::ArrayXd, 2>{col(ForcingSample::W1x), col(ForcingSample::W1y)},
      std::array<Eigen::ArrayXd, 2>{col(ForcingSample::W2x), col(ForcingSample::W2y)},
      std::array<Eigen::ArrayXd, 2>{col(ForcingSample::W3x), col(ForcingSample::W3y)}};
  const Eigen::ArrayXd divw = dw[0][0] + dw[1][1];

  const Eigen::ArrayXd th = ws.values(v.component(0));
  std::array<Eigen::ArrayXd, 3> u, dth;
  for (int i = 0; i < 3; ++i) {
    u[i] = ws.values(v.component(1 + i));
    dth[i] = ws.derivative_values(v.component(0), i);
  }
  Eigen::ArrayXd divv = Eigen::ArrayXd::Zero(th.size());
  std::array<Eigen::ArrayXd, 3> wgrad;  // (w.grad) v_i
  for (int i = 0; i < 3; ++i) {
    wgrad[i] = Eigen::ArrayXd::Zero(th.size());
    for (int j = 0; j < 3; ++j) {
      const Eigen::ArrayXd d = ws.derivative_values(v.component(1 + i), j);
      wgrad[i] += w[j] * d;
      if (i == j) divv += d;
    }
  }
  const Eigen::ArrayXd wgrad_th = w[0] * dth[0] + w[1] * dth[1] + w[2] * dth[2];
  out.component(0) =
      ws.dealiased_spectrum(-(wgrad_th + gbar * a * divv + u[0] * ax + u[1] * ay + gbar * th * divw));
  const std::array<const Eigen::ArrayXd*, 3> grad_a{&ax, &ay, nullptr};
  for (int i = 0; i < 3; ++i) {
    Eigen::ArrayXd r = wgrad[i] + gbar * a * dth[i] + u[0] * dw[i][0] + u[1] * dw[i][1];
    if (grad_a[i]) r += gbar * th * (*grad_a[i]);
    out.component(1 + i) = ws.dealiased_spectrum(-r);
  }
  return out;
}

double Perturbed3D::max_speed(const SpectralField& v) const {
  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid().size()));
  for (int i = 0; i < 3; ++i) s += ws_->values(v.component(1 + i)).square();
  return s.sqrt().maxCoeff();
}

SpectralField nonlinear_rhs_3d(const SpectralField& v, const PhysicalParams& params) {
  return Perturbed3D(v.grid(), params).nonlinear_rhs(v);
}

SpectralField coupling_rhs(const SpectralField& v, const ForcingContext& ctx, double t, const PhysicalParams& params) {
  if (!(ctx.grid3() == v.grid())) throw Error("coupling_rhs: context built for another grid");
  return Perturbed3D(v.grid(), params).coupling_rhs(v, ctx.sample(t));
}

Trajectory3D solve_perturbed(const State3D& initial, const ForcingContext& ctx, const SolverConfig& config,
                             const PhysicalParams& params, const Observer3D& observer) {
  config.validate();
  if (initial.fields.components() != 4) throw Error("solve_perturbed: state must have 4 components");
  if (!(ctx.grid3() == initial.fields.grid())) throw Error("solve_perturbed: forcing context grid mismatch");
  const Perturbed3D system(initial.fields.grid(), params);
  const BoxGrid& g = system.grid();

  const long steps = std::max(1L, std::lround(std::ceil(config.t_final / config.dt - 1e-9)));
  const double h = config.t_final / static_cast<double>(steps);
  const double dx = std::min({g.spacing(0), g.spacing(1), g.spacing(2)});
  if (!ctx.is_zero() && (initial.time < ctx.t_begin() - 1e-12 || initial.time + config.t_final > ctx.t_end() + 1e-9))
    throw Error("solve_perturbed: forcing context does not cover the integration interval");

  Trajectory3D traj;
  traj.snapshot_interval = h * config.snapshot_stride;
  State3D state = initial;
  if (config.dealias) dealias_inplace(state.fields);
  traj.initial_norm = sobolev_norm(state.fields, config.monitor_index);
  traj.sup_norm = traj.initial_norm;
  const auto record = [&](const State3D& s) {
    if (config.keep_snapshots) traj.snapshots.push_back(s);
    if (observer) observer(s);
  };
  record(state);

  std::deque<std::pair<double, ForcingSample>> cache;
  const auto forcing = [&](double t) -> const ForcingSample& {
    for (const auto& [time, s] : cache)
      if (same_time(time, t)) return s;
    if (cache.size() >= 4) cache.pop_front();
    cache.emplace_back(t, ctx.sample(t));
    return cache.back().second;
  };
  const auto rhs = [&](const SpectralField& f, double t) {
    SpectralField r = config.nonlinear ? system.nonlinear_rhs(f) : SpectralField(f.grid(), 4);
    if (!ctx.is_zero()) r += system.coupling_rhs(f, forcing(t));
    return r;
  };
  std::map<int, Propagator> half_steps;

  for (long n = 0; n < steps; ++n) {
    const double t0 = initial.time + static_cast<double>(n) * h;
    int sub = 1;
    double speed = config.nonlinear ? system.max_speed(state.fields) : 0.0;
    if (!ctx.is_zero()) {
      const auto& c = forcing(t0).columns;
      speed += (c.col(ForcingSample::W1).square() + c.col(ForcingSample::W2).square() +
                c.col(ForcingSample::W3).square())
                   .sqrt()
                   .maxCoeff();
    }
    if (speed * h > config.cfl * dx) sub = static_cast<int>(std::ceil(speed * h / (config.cfl * dx)));
    auto it = half_steps.find(sub);
    if (it == half_steps.end())
      it = half_steps.emplace(sub, Propagator(system.basis(), params, 0.5 * h / sub)).first;

    SpectralField next = state.fields;
    for (int j = 0; j < sub; ++j) step_if_rk4(next, h / sub, it->second, rhs, t0 + j * h / sub);
    traj.substeps += sub;
    if (!next.is_finite()) {
      std::ostringstream os;
      os << "non-finite perturbation in step " << n + 1 << " (t = " << t0 << "); last valid state kept";
      traj.status = RunStatus::NonFinite;
      traj.message = os.str();
      break;
    }
    state.fields = std::move(next);
    state.time = initial.time + static_cast<double>(n + 1) * h;
    traj.steps = static_cast<int>(n + 1);
    if ((n + 1) % config.snapshot_stride == 0 || n + 1 == steps) {
      const double norm = sobolev_norm(state.fields, config.monitor_index);
      traj.sup_norm = std::max(traj.sup_norm, norm);
      record(state);
      if (traj.initial_norm > 0.0 && norm > config.blowup_factor * traj.initial_norm) {
        std::ostringstream os;
        os << "H^" << config.monitor_index << " norm grew from " << traj.initial_norm << " to " << norm
           << " by t = " << state.time;
        traj.status = RunStatus::BlowUp;
        traj.message = os.str();
        break;
      }
    }
  }
  return traj;
}

SpectralField reconstruct_full(const State2D& two_d, const State3D& three_d, double dt) {
  if (std::abs(two_d.time - three_d.time) > 0.5 * dt) {
    std::ostringstream os;
    os << "reconstruct_full: 2D time " << two_d.time << " and 3D time " << three_d.time << " differ by more than dt/2";
    throw Error(os.str());
  }
  return extend_2d_to_3d(two_d.fields, three_d.fields.grid()) + three_d.fields;
}

SpectralField reconstruct_density(const SpectralField& b, const PhysicalParams& params) {
  if (b.components() != 1) throw Error("reconstruct_density: expects a scalar field");
  const FourierTransform fft(b.grid());
  const Eigen::ArrayXd arg = 1.0 + params.delta * fft.backward(b.component(0));
  Eigen::Index worst = 0;
  const double lowest = arg.minCoeff(&worst);
  if (!(lowest > 0.0)) {
    const auto p = b.grid().position(static_cast<std::size_t>(worst));
    std::ostringstream os;
    os << "reconstruct_density: 1 + delta b = " << lowest << " at grid point (" << p[0] << ", " << p[1];
    if (b.grid().dim == 3) os << ", " << p[2];
    os << ")";
    throw Error(os.str());
  }
  SpectralField rho(b.grid(), 1);
  rho.component(0) = fft.forward((params.gamma_bar * arg).pow(1.0 / params.gamma_bar));
  return rho;
}

}  // namespace spqg
