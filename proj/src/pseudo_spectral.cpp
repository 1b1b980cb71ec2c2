#include "spqg/pseudo_spectral.hpp"

namespace spqg {

SpectralWorkspace::SpectralWorkspace(const BoxGrid& grid) : table_(grid), fft_(grid) {}

Eigen::ArrayXd SpectralWorkspace::derivative_values(const Eigen::Ref<const Eigen::VectorXcd>& spectrum,
                                                    int axis) const {
  const Eigen::VectorXcd d = (spectrum.array() * (Complex(0.0, 1.0) * table_.k[axis])).matrix();
  return fft_.backward(d);
}

Eigen::VectorXcd SpectralWorkspace::dealiased_spectrum(const Eigen::Ref<const Eigen::ArrayXd>& samples) const {
  return (fft_.forward(samples).array() * table_.keep).matrix();
}

}  // namespace spqg
