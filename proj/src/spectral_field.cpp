#include "spqg/spectral_field.hpp"

#include <algorithm>

namespace spqg {

SpectralField::SpectralField(const BoxGrid& grid, int components)
    : grid_(grid),
      coeffs_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(grid.size()), components)) {
  if (components <= 0) throw Error("SpectralField: component count must be positive");
}

SpectralField::SpectralField(const BoxGrid& grid, Eigen::MatrixXcd coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != static_cast<Eigen::Index>(grid.size()) || coeffs_.cols() <= 0)
    throw Error("SpectralField: coefficient matrix does not match grid");
}

SpectralField SpectralField::slice(int first, int count) const {
  if (first < 0 || count <= 0 || first + count > components())
    throw Error("SpectralField::slice: component range out of bounds");
  return SpectralField(grid_, coeffs_.middleCols(first, count));
}

SpectralField SpectralField::stack(const SpectralField& lhs, const SpectralField& rhs) {
  if (!(lhs.grid() == rhs.grid())) throw Error("SpectralField::stack: grid mismatch");
  Eigen::MatrixXcd c(lhs.coeffs().rows(), lhs.components() + rhs.components());
  c << lhs.coeffs(), rhs.coeffs();
  return SpectralField(lhs.grid(), std::move(c));
}

void SpectralField::require_same_shape(const SpectralField& other, const char* what) const {
  if (!(grid_ == other.grid_) || components() != other.components())
    throw Error(std::string("SpectralField ") + what + ": grid or component mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_shape(other, "+=");
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_shape(other, "-=");
  coeffs_ -= other.coeffs_;
  return *this;
}

double SpectralField::conjugate_symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < modes(); ++i) {
    const std::size_t j = grid_.conjugate_index(i);
    for (int c = 0; c < components(); ++c)
      worst = std::max(worst, std::abs(coeffs_(i, c) - std::conj(coeffs_(j, c))));
  }
  return worst;
}

void SpectralField::symmetrize() {
  Eigen::MatrixXcd out(coeffs_.rows(), coeffs_.cols());
  for (std::size_t i = 0; i < modes(); ++i) {
    const std::size_t j = grid_.conjugate_index(i);
    out.row(i) = 0.5 * (coeffs_.row(i) + coeffs_.row(j).conjugate());
  }
  coeffs_ = std::move(out);
}

}  // namespace spqg
