#pragma once

#include "spqg/fourier_transform.hpp"

namespace spqg {

/// Transform plus tabulated wavenumbers for one grid; the building block of
/// every nonlinear right-hand side. Not thread-safe (owns FFT scratch).
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const BoxGrid& grid);

  const BoxGrid& grid() const { return table_.grid; }
  const WavenumberTable& table() const { return table_; }

  /// Physical samples of a spectrum.
  Eigen::ArrayXd values(const Eigen::Ref<const Eigen::VectorXcd>& spectrum) const {
    return fft_.backward(spectrum);
  }
  /// Physical samples of d/dx_axis of a spectrum.
  Eigen::ArrayXd derivative_values(const Eigen::Ref<const Eigen::VectorXcd>& spectrum, int axis) const;
  /// Spectrum of physical samples with the 2/3 rule applied.
  Eigen::VectorXcd dealiased_spectrum(const Eigen::Ref<const Eigen::ArrayXd>& samples) const;

  const FourierTransform& transform() const { return fft_; }

 private:
  WavenumberTable table_;
  FourierTransform fft_;
};

}  // namespace spqg
