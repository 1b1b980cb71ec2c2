#pragma once

#include <complex>

#include <Eigen/Core>

#include "spqg/grid.hpp"

namespace spqg {

using Complex = std::complex<double>;

/// Multi-component Fourier coefficients on a BoxGrid.
///
/// Coefficients live in an Eigen matrix with one row per wavevector (flat
/// grid order) and one column per component, so a component is a contiguous
/// column and per-mode vectors are rows. The transform convention is forward
/// unscaled, backward scaled by 1/N^dim.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const BoxGrid& grid, int components);
  SpectralField(const BoxGrid& grid, Eigen::MatrixXcd coeffs);

  const BoxGrid& grid() const { return grid_; }
  int components() const { return static_cast<int>(coeffs_.cols()); }
  std::size_t modes() const { return static_cast<std::size_t>(coeffs_.rows()); }

  Eigen::MatrixXcd& coeffs() { return coeffs_; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  auto component(int c) { return coeffs_.col(c); }
  auto component(int c) const { return coeffs_.col(c); }

  /// Fresh field holding components [first, first + count).
  SpectralField slice(int first, int count) const;
  /// Concatenate components of two fields on the same grid.
  static SpectralField stack(const SpectralField& lhs, const SpectralField& rhs);

  void set_zero() { coeffs_.setZero(); }
  bool is_finite() const { return coeffs_.allFinite(); }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }

  /// Largest |f(k) - conj(f(-k))| over all modes and components.
  double conjugate_symmetry_defect() const;
  /// Replace coefficients by their Hermitian-symmetric part.
  void symmetrize();

 private:
  void require_same_shape(const SpectralField& other, const char* what) const;

  BoxGrid grid_;
  Eigen::MatrixXcd coeffs_;
};

inline SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
inline SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
inline SpectralField operator*(double s, SpectralField f) { return f *= s; }

/// Physical-space samples: one row per grid point, one column per component.
using PhysicalField = Eigen::ArrayXXd;

}  // namespace spqg
