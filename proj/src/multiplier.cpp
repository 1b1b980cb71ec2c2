#include "spqg/multiplier.hpp"

namespace spqg {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_components(const SpectralField& f, int count, const char* what) {
  if (f.components() != count)
    throw Error(std::string(what) + ": expected " + std::to_string(count) + " components, got " +
                std::to_string(f.components()));
}

}  // namespace

SpectralField apply_multiplier(const SpectralField& f, const MatrixSymbol& symbol) {
  const BoxGrid& g = f.grid();
  const Eigen::MatrixXcd probe = symbol(Eigen::Vector3d::Zero());
  if (probe.cols() != f.components())
    throw Error("apply_multiplier: symbol has " + std::to_string(probe.cols()) +
                " columns but field has " + std::to_string(f.components()) + " components");
  SpectralField out(g, static_cast<int>(probe.rows()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Eigen::MatrixXcd m = symbol(g.wavevector(i));
    if (m.rows() != probe.rows() || m.cols() != probe.cols())
      throw Error("apply_multiplier: symbol shape varies across wavevectors");
    const auto row = static_cast<Eigen::Index>(i);
    out.coeffs().row(row) = (m * f.coeffs().row(row).transpose()).transpose();
  }
  return out;
}

SpectralField apply_multiplier(const SpectralField& f, const ScalarSymbol& symbol) {
  const BoxGrid& g = f.grid();
  SpectralField out(g, f.components());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    out.coeffs().row(row) = symbol(g.wavevector(i)) * f.coeffs().row(row);
  }
  return out;
}

void dealias_inplace(SpectralField& f) {
  const BoxGrid& g = f.grid();
  std::size_t flat = 0;
  for (int i0 = 0; i0 < g.n[0]; ++i0) {
    const bool out0 = g.dim > 0 && 3 * std::abs(g.mode_index(0, i0)) > g.n[0];
    for (int i1 = 0; i1 < g.n[1]; ++i1) {
      const bool out1 = out0 || (3 * std::abs(g.mode_index(1, i1)) > g.n[1]);
      for (int i2 = 0; i2 < g.n[2]; ++i2, ++flat) {
        const bool out2 = out1 || (g.dim == 3 && 3 * std::abs(g.mode_index(2, i2)) > g.n[2]);
        if (out2) f.coeffs().row(static_cast<Eigen::Index>(flat)).setZero();
      }
    }
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_inplace(out);
  return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim) throw Error("derivative: axis out of range");
  const BoxGrid& g = f.grid();
  SpectralField out(g, f.components());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto p = g.position(i);
    const auto row = static_cast<Eigen::Index>(i);
    out.coeffs().row(row) = (kI * g.wavenumber(axis, p[axis])) * f.coeffs().row(row);
  }
  return out;
}

SpectralField gradient(const SpectralField& scalar) {
  require_components(scalar, 1, "gradient");
  SpectralField out = derivative(scalar, 0);
  for (int a = 1; a < scalar.grid().dim; ++a) out = SpectralField::stack(out, derivative(scalar, a));
  return out;
}

SpectralField grad_perp(const SpectralField& scalar) {
  require_components(scalar, 1, "grad_perp");
  if (scalar.grid().dim != 2) throw Error("grad_perp: 2D fields only");
  return SpectralField::stack(-1.0 * derivative(scalar, 1), derivative(scalar, 0));
}

SpectralField divergence(const SpectralField& vector) {
  const int d = vector.grid().dim;
  require_components(vector, d, "divergence");
  SpectralField out = derivative(vector.slice(0, 1), 0);
  for (int a = 1; a < d; ++a) out += derivative(vector.slice(a, 1), a);
  return out;
}

SpectralField curl_2d(const SpectralField& vector) {
  require_components(vector, 2, "curl_2d");
  return derivative(vector.slice(1, 1), 0) - derivative(vector.slice(0, 1), 1);
}

SpectralField perp(const SpectralField& vector) {
  require_components(vector, 2, "perp");
  return SpectralField::stack(-1.0 * vector.slice(1, 1), vector.slice(0, 1));
}

}  // namespace spqg
