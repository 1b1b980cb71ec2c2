#pragma once

#include <memory>

#include "spqg/spectral_field.hpp"

namespace spqg {

/// Real-to-complex transforms between physical samples and full-lattice
/// Fourier coefficients on one BoxGrid (FFTW underneath).
///
/// Forward is unscaled, backward multiplies by 1/N^dim. Plans use
/// FFTW_ESTIMATE so results are bit-reproducible run to run. An instance owns
/// scratch buffers: share it between threads only read-only through copies.
class FourierTransform {
 public:
  explicit FourierTransform(const BoxGrid& grid);
  ~FourierTransform();
  FourierTransform(FourierTransform&&) noexcept;
  FourierTransform& operator=(FourierTransform&&) noexcept;
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const BoxGrid& grid() const;

  /// Real samples of one component.
  Eigen::ArrayXd backward(const Eigen::Ref<const Eigen::VectorXcd>& spectrum) const;
  /// Full Hermitian spectrum of real samples.
  Eigen::VectorXcd forward(const Eigen::Ref<const Eigen::ArrayXd>& values) const;

  PhysicalField to_physical(const SpectralField& field) const;
  SpectralField to_spectral(const PhysicalField& values) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Thread count taken from SPQG_NUM_THREADS (default 1).
int configured_thread_count();

/// Spectrum interpolated onto a grid refined by an integer factor per axis.
/// Modes at the Nyquist index are dropped; coefficients are rescaled so that
/// the physical values agree at shared grid points.
SpectralField zero_pad(const SpectralField& field, int factor);

/// Embed (factor > 1 grids) or truncate a spectrum onto another grid with
/// identical box lengths, keeping physical amplitudes.
SpectralField resample(const SpectralField& field, const BoxGrid& target);

}  // namespace spqg
