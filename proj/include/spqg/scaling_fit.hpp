#pragma once

#include <utility>
#include <vector>

namespace spqg {

/// value ~ prefactor * parameter^exponent, fitted by least squares in log-log.
/// residual is the root-mean-square of the log residuals.
struct ScalingFit {
  std::vector<std::pair<double, double>> samples;
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;
};

/// Needs at least three samples, all strictly positive with distinct parameters.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& samples);

}  // namespace spqg
