#pragma once

#include <functional>

#include "spqg/spectral_field.hpp"

namespace spqg {

/// Per-wavevector complex matrix symbol; the column count must equal the
/// input component count, the row count sets the output component count.
using MatrixSymbol = std::function<Eigen::MatrixXcd(const Eigen::Vector3d& xi)>;
/// Per-wavevector scalar symbol applied to every component.
using ScalarSymbol = std::function<Complex(const Eigen::Vector3d& xi)>;

SpectralField apply_multiplier(const SpectralField& f, const MatrixSymbol& symbol);
SpectralField apply_multiplier(const SpectralField& f, const ScalarSymbol& symbol);

/// Zero every coefficient whose mode index exceeds n/3 in magnitude on any axis.
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);

/// d/dx_axis of every component.
SpectralField derivative(const SpectralField& f, int axis);

// Horizontal vector calculus on 2D fields. Conventions: grad_perp = (-d2, d1),
// w_perp = (-w2, w1), curl w = d1 w2 - d2 w1.
SpectralField gradient(const SpectralField& scalar);
SpectralField grad_perp(const SpectralField& scalar);
SpectralField divergence(const SpectralField& vector);
SpectralField curl_2d(const SpectralField& vector);
SpectralField perp(const SpectralField& vector);

}  // namespace spqg
