#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace spqg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic box with an even number of points per axis.
///
/// Unused axes (axis 2 of a 2D grid) carry one point and unit length so that
/// flat indexing is uniform: flat = (i0 * n1 + i1) * n2 + i2, axis 0 slowest.
/// Wavenumber index along an axis follows FFT order 0, 1, ..., n/2-1,
/// -n/2, ..., -1 and is scaled by 2*pi/L.
struct BoxGrid {
  int dim = 2;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};

  /// Same resolution and length on every axis.
  static BoxGrid cube(int dim, int points, double box_length);
  /// General box; validates every invariant.
  static BoxGrid make(int dim, const std::array<int, 3>& points,
                      const std::array<double, 3>& lengths);

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(size()); }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  double fundamental(int axis) const;

  /// Signed integer mode index for FFT position i along an axis.
  int mode_index(int axis, int i) const { return i < n[axis] / 2 ? i : i - n[axis]; }
  double wavenumber(int axis, int i) const { return mode_index(axis, i) * fundamental(axis); }

  std::array<int, 3> position(std::size_t flat) const;
  Eigen::Vector3d wavevector(std::size_t flat) const;
  std::size_t flat_index(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n[1] + i1) * n[2] + i2;
  }
  /// Flat index of the mode -k (conjugate partner).
  std::size_t conjugate_index(std::size_t flat) const;

  /// Largest |xi| present on the lattice.
  double max_wavenumber() const;
  /// Smallest nonzero |xi| present on the lattice.
  double min_wavenumber() const;

  bool operator==(const BoxGrid& other) const = default;
  std::string describe() const;
};

/// Per-axis wavenumbers tabulated in flat order, reused by hot loops.
struct WavenumberTable {
  explicit WavenumberTable(const BoxGrid& grid);

  BoxGrid grid;
  std::array<Eigen::ArrayXd, 3> k;  // k[axis](flat)
  Eigen::ArrayXd k2;                // |xi|^2
  Eigen::ArrayXd keep;              // 1 inside the 2/3-rule band, 0 outside
};

}  // namespace spqg
