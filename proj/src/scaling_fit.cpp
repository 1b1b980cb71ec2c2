#include "spqg/scaling_fit.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spqg/grid.hpp"

namespace spqg {

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw Error("fit_scaling: need at least 3 samples, got " + std::to_string(samples.size()));
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [x, v] = samples[static_cast<std::size_t>(i)];
    if (!(x > 0.0) || !(v > 0.0) || !std::isfinite(x) || !std::isfinite(v))
      throw Error("fit_scaling: nonpositive or non-finite sample (" + std::to_string(x) + ", " + std::to_string(v) +
                  ")");
    design(i, 0) = std::log(x);
    design(i, 1) = 1.0;
    y(i) = std::log(v);
  }
  if (design.col(0).maxCoeff() == design.col(0).minCoeff()) throw Error("fit_scaling: parameters are all equal");
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  ScalingFit fit;
  fit.samples = samples;
  fit.exponent = coef(0);
  fit.prefactor = std::exp(coef(1));
  fit.residual = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace spqg
