#include "spqg/wave_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace spqg {

namespace {

constexpr Complex kI{0.0, 1.0};

// Rotate a vector so that its first non-negligible component is real positive.
template <typename Vec>
void fix_phase(Vec&& v) {
  const double scale = v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-10 * scale) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

// Canonical orthonormal basis of a degenerate eigenspace: project unit
// vectors e_0..e_3 in turn, always taking the one with the largest remaining
// norm (lowest index on ties).
Eigen::MatrixXcd canonical_basis(const Eigen::MatrixXcd& span_vectors) {
  const Eigen::Index n = span_vectors.rows();
  const Eigen::Index dim = span_vectors.cols();
  const Eigen::MatrixXcd projector = span_vectors * span_vectors.adjoint();
  Eigen::MatrixXcd out(n, dim);
  for (Eigen::Index picked = 0; picked < dim; ++picked) {
    Eigen::VectorXcd best;
    double best_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXcd v = projector.col(j);
      for (Eigen::Index p = 0; p < picked; ++p) v -= out.col(p).dot(v) * out.col(p);
      const double nv = v.norm();
      if (nv > best_norm + 1e-12) {
        best_norm = nv;
        best = v;
      }
    }
    out.col(picked) = best / best_norm;
  }
  return out;
}

template <int Rank>
using ModeMatrix = Eigen::Matrix<Complex, Rank, Rank>;
template <int Rank>
using ModeVector = Eigen::Matrix<Complex, Rank, 1>;

template <int Rank>
void project_kernel(const SpectralField& f, const WaveBasis& basis, const BranchMask& mask, SpectralField& out) {
  ModeVector<Rank> sel;
  for (int j = 0; j < Rank; ++j) sel(j) = mask[j] ? 1.0 : 0.0;
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::Map<const ModeMatrix<Rank>> d(basis.vectors(i).data());
    const ModeVector<Rank> x = f.coeffs().row(row).transpose();
    const ModeVector<Rank> c = (d.adjoint() * x).cwiseProduct(sel);
    out.coeffs().row(row) = (d * c).transpose();
  }
}

template <int Rank>
void phase_kernel(SpectralField& f, const WaveBasis& basis, const Eigen::MatrixXcd& phases) {
  for (std::size_t i = 0; i < f.modes(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::Map<const ModeMatrix<Rank>> d(basis.vectors(i).data());
    const ModeVector<Rank> x = f.coeffs().row(row).template head<Rank>().transpose();
    const ModeVector<Rank> c = (d.adjoint() * x).cwiseProduct(phases.row(row).transpose());
    f.coeffs().row(row).template head<Rank>() = (d * c).transpose();
  }
}

void require_rank(const SpectralField& f, const WaveBasis& basis, bool exact, const char* what) {
  if (!(f.grid() == basis.grid())) throw Error(std::string(what) + ": grid does not match eigensystem");
  if (exact ? f.components() != basis.rank() : f.components() < basis.rank())
    throw Error(std::string(what) + ": field has " + std::to_string(f.components()) +
                " components, eigensystem rank is " + std::to_string(basis.rank()));
}

}  // namespace

PhysicalParams PhysicalParams::make(double gamma, double delta, double nu) {
  if (!(gamma > 1.0)) throw Error("PhysicalParams: gamma must exceed 1");
  if (!(delta > 0.0)) throw Error("PhysicalParams: delta must be positive");
  if (!(nu > 0.0)) throw Error("PhysicalParams: nu must be positive");
  PhysicalParams p;
  p.gamma = gamma;
  p.gamma_bar = (gamma - 1.0) / 2.0;
  p.delta = delta;
  p.nu = nu;
  p.epsilon = delta / (p.gamma_bar * nu);
  return p;
}

EigenSystem2D eigendecompose_2d(const Eigen::Vector2d& eta, double nu) {
  if (!(nu > 0.0)) throw Error("eigendecompose_2d: nu must be positive");
  const double e2 = eta.squaredNorm();
  const double e = std::sqrt(e2);
  const double p = std::sqrt(nu * nu + e2);
  EigenSystem2D sys;
  sys.frequencies << 0.0, p, -p;
  // Kernel: proportional to (nu, -i eta2, i eta1).
  sys.vectors.col(0) << Complex(nu / p), -kI * (eta(1) / p), kI * (eta(0) / p);
  for (int s = 0; s < 2; ++s) {
    const double lambda = s == 0 ? p : -p;
    auto col = sys.vectors.col(1 + s);
    if (e2 == 0.0) {
      col << Complex(0.0), Complex(1.0 / std::sqrt(2.0)), -kI * (lambda / nu) / std::sqrt(2.0);
    } else {
      const double norm = std::sqrt(2.0) * p;
      col << Complex(e / norm), (lambda * eta(0) + kI * nu * eta(1)) / (e * norm),
          (lambda * eta(1) - kI * nu * eta(0)) / (e * norm);
    }
  }
  return sys;
}

EigenSystem3D eigendecompose_3d(const Eigen::Vector3d& xi, double nu) {
  if (!(nu > 0.0)) throw Error("eigendecompose_3d: nu must be positive");
  const Eigen::Matrix4cd hermitian = -kI * assemble_symbol_3d<double>(xi, nu);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecompose_3d: eigensolver did not converge at xi = (" + std::to_string(xi(0)) + ", " +
                std::to_string(xi(1)) + ", " + std::to_string(xi(2)) + ")");
  }
  // Eigen returns ascending order; flip to descending.
  EigenSystem3D sys;
  for (int j = 0; j < 4; ++j) {
    sys.frequencies(j) = solver.eigenvalues()(3 - j);
    sys.vectors.col(j) = solver.eigenvectors().col(3 - j);
  }
  const double scale = std::max(1.0, std::sqrt(xi.squaredNorm() + nu * nu));
  const double tie = 1e-9 * scale;
  int start = 0;
  while (start < 4) {
    int stop = start + 1;
    while (stop < 4 && std::abs(sys.frequencies(stop) - sys.frequencies(start)) <= tie) ++stop;
    if (stop - start > 1) {
      const double mean = sys.frequencies.segment(start, stop - start).mean();
      sys.frequencies.segment(start, stop - start).setConstant(mean);
      sys.vectors.middleCols(start, stop - start) = canonical_basis(sys.vectors.middleCols(start, stop - start));
    }
    start = stop;
  }
  for (int j = 0; j < 4; ++j) fix_phase(sys.vectors.col(j));
  return sys;
}

BranchMask mask_of(Branch b) {
  BranchMask m{false, false, false, false};
  m[static_cast<int>(b)] = true;
  return m;
}

BranchMask mask_of(BranchSet s) {
  return s == BranchSet::Slow ? BranchMask{false, true, true, false} : BranchMask{true, false, false, true};
}

WaveBasis::WaveBasis(const BoxGrid& grid, double nu) : grid_(grid), nu_(nu), rank_(grid.dim == 2 ? 3 : 4) {
  if (!(nu > 0.0)) throw Error("WaveBasis: nu must be positive");
  const auto modes = static_cast<Eigen::Index>(grid.size());
  freqs_.resize(modes, rank_);
  vecs_.resize(modes, rank_ * rank_);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::Vector3d xi = grid.wavevector(i);
    const auto row = static_cast<Eigen::Index>(i);
    if (rank_ == 3) {
      const EigenSystem2D sys = eigendecompose_2d(xi.head<2>(), nu);
      freqs_.row(row) = sys.frequencies.transpose();
      vecs_.row(row) = Eigen::Map<const Eigen::Matrix<Complex, 1, 9>>(sys.vectors.data());
    } else {
      const EigenSystem3D sys = eigendecompose_3d(xi, nu);
      freqs_.row(row) = sys.frequencies.transpose();
      vecs_.row(row) = Eigen::Map<const Eigen::Matrix<Complex, 1, 16>>(sys.vectors.data());
    }
  }
  // One contiguous column-major rank x rank block per mode.
  vecs_ = Eigen::MatrixXcd(vecs_.transpose());
}

Eigen::Map<const Eigen::MatrixXcd> WaveBasis::vectors(std::size_t mode) const {
  return Eigen::Map<const Eigen::MatrixXcd>(vecs_.data() + mode * rank_ * rank_, rank_, rank_);
}

SpectralField project(const SpectralField& f, const WaveBasis& basis, const BranchMask& mask) {
  require_rank(f, basis, true, "project");
  SpectralField out(f.grid(), f.components());
  if (basis.rank() == 3)
    project_kernel<3>(f, basis, mask, out);
  else
    project_kernel<4>(f, basis, mask, out);
  return out;
}

SpectralField project(const SpectralField& f, const WaveBasis& basis, Branch b) {
  if (basis.rank() != 3) throw Error("project: single-branch selection applies to 2D eigensystems");
  return project(f, basis, mask_of(b));
}

SpectralField project(const SpectralField& f, const WaveBasis& basis, BranchSet s) {
  if (basis.rank() == 3)
    return project(f, basis, s == BranchSet::Slow ? mask_of(Branch::Zero) : BranchMask{false, true, true, false});
  return project(f, basis, mask_of(s));
}

std::pair<SpectralField, SpectralField> slow_fast_split(const SpectralField& w, const WaveBasis& basis) {
  if (basis.rank() != 3 || w.components() != 3)
    throw Error("slow_fast_split: expects a 3-component 2D field and a 2D eigensystem");
  return {project(w, basis, Branch::Zero), project(w, basis, BranchMask{false, true, true, false})};
}

SpectralField linear_propagate(const SpectralField& f, double t, const PhysicalParams& params,
                               const WaveBasis& basis) {
  SpectralField out = f;
  Propagator(basis, params, t).apply(out);
  return out;
}

Propagator::Propagator(const WaveBasis& basis, const PhysicalParams& params, double tau)
    : basis_(&basis), tau_(tau) {
  const double rate = params.stiffness() * tau;
  const Eigen::MatrixXd& w = basis.frequencies();
  phases_.resize(w.rows(), w.cols());
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) phases_(i, j) = std::polar(1.0, -rate * w(i, j));
}

void Propagator::apply(SpectralField& f) const {
  require_rank(f, *basis_, false, "Propagator::apply");
  if (basis_->rank() == 3)
    phase_kernel<3>(f, *basis_, phases_);
  else
    phase_kernel<4>(f, *basis_, phases_);
}

}  // namespace spqg
