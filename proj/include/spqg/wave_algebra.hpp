#pragma once

#include <array>
#include <utility>

#include <Eigen/Core>

#include "spqg/spectral_field.hpp"

namespace spqg {

/// Nondimensional constants of the rotating compressible system.
/// gamma_bar = (gamma-1)/2 and the Rossby number epsilon = delta/(gamma_bar nu)
/// are derived, never set independently.
struct PhysicalParams {
  double gamma = 2.0;
  double gamma_bar = 0.5;
  double delta = 0.1;
  double nu = 1.0;
  double epsilon = 0.2;

  static PhysicalParams make(double gamma, double delta, double nu);
  /// gamma_bar / delta: the rate multiplying the large operator.
  double stiffness() const { return gamma_bar / delta; }
};

/// Fourier symbol of the 2D large operator acting on (a, w1, w2).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 3, 3> assemble_symbol_2d(const Eigen::Matrix<Scalar, 2, 1>& eta, Scalar nu) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  Eigen::Matrix<C, 3, 3> m;
  m << C(0), i * eta(0), i * eta(1),
       i * eta(0), C(0), C(-nu),
       i * eta(1), C(nu), C(0);
  return m;
}

/// Fourier symbol of the 3D large operator acting on (b, u1, u2, u3).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> assemble_symbol_3d(const Eigen::Matrix<Scalar, 3, 1>& xi, Scalar nu) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  Eigen::Matrix<C, 4, 4> m;
  m << C(0), i * xi(0), i * xi(1), i * xi(2),
       i * xi(0), C(0), C(-nu), C(0),
       i * xi(1), C(nu), C(0), C(0),
       i * xi(2), C(0), C(0), C(0);
  return m;
}

/// symbol * d_j = i * frequency_j * d_j with orthonormal columns d_j.
/// Columns are ordered (zero, plus, minus): frequencies {0, p, -p},
/// p = sqrt(nu^2 + |eta|^2).
struct EigenSystem2D {
  Eigen::Vector3d frequencies;
  Eigen::Matrix3cd vectors;
};

/// Frequencies sorted descending; for |xi_3| > 0 they are the acoustic pair
/// +-w_fast and the inertial pair +-w_slow (middle two entries), which
/// collapse to a double zero on the xi_3 = 0 plane.
struct EigenSystem3D {
  Eigen::Vector4d frequencies;
  Eigen::Matrix4cd vectors;
};

EigenSystem2D eigendecompose_2d(const Eigen::Vector2d& eta, double nu);
EigenSystem3D eigendecompose_3d(const Eigen::Vector3d& xi, double nu);

enum class Branch { Zero = 0, Plus = 1, Minus = 2 };
/// 3D grouping: Slow = the two middle frequencies, Fast = the outer pair.
enum class BranchSet { Slow, Fast };

/// Selection of eigen-indices, one flag per column of the per-mode basis.
using BranchMask = std::array<bool, 4>;
BranchMask mask_of(Branch b);
BranchMask mask_of(BranchSet s);

/// Per-wavevector eigensystems for every mode of a grid, built once and
/// immutable afterwards.
class WaveBasis {
 public:
  WaveBasis(const BoxGrid& grid, double nu);

  const BoxGrid& grid() const { return grid_; }
  double nu() const { return nu_; }
  /// 3 for 2D grids, 4 for 3D grids.
  int rank() const { return rank_; }

  const Eigen::MatrixXd& frequencies() const { return freqs_; }  // modes x rank
  /// Eigenvectors of one mode, column-major rank x rank.
  Eigen::Map<const Eigen::MatrixXcd> vectors(std::size_t mode) const;

 private:
  BoxGrid grid_;
  double nu_;
  int rank_;
  Eigen::MatrixXd freqs_;
  Eigen::MatrixXcd vecs_;  // rank*rank x modes
};

/// P f = sum over selected j of (f . conj(d_j)) d_j. Acts on the first rank()
/// components; the field must have exactly rank() components.
SpectralField project(const SpectralField& f, const WaveBasis& basis, const BranchMask& mask);
SpectralField project(const SpectralField& f, const WaveBasis& basis, Branch b);
SpectralField project(const SpectralField& f, const WaveBasis& basis, BranchSet s);

/// (W^S, W^F) = (P_0 W, P_+ W + P_- W) for a 3-component 2D field.
std::pair<SpectralField, SpectralField> slow_fast_split(const SpectralField& w, const WaveBasis& basis);

/// Exact solution operator of d/dt f + (gamma_bar/delta) L f = 0 over time t.
SpectralField linear_propagate(const SpectralField& f, double t, const PhysicalParams& params,
                               const WaveBasis& basis);

/// Cached diagonal phases e^{-i (gamma_bar tau/delta) w_j} for one time step.
/// apply() transforms the leading rank() components in place and leaves any
/// trailing components (passive tracers) untouched.
class Propagator {
 public:
  Propagator(const WaveBasis& basis, const PhysicalParams& params, double tau);
  void apply(SpectralField& f) const;
  double tau() const { return tau_; }

 private:
  const WaveBasis* basis_;
  double tau_;
  Eigen::MatrixXcd phases_;  // modes x rank
};

}  // namespace spqg
