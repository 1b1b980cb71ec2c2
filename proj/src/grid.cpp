#include "spqg/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace spqg {

BoxGrid BoxGrid::cube(int dim, int points, double box_length) {
  std::array<int, 3> pts{1, 1, 1};
  std::array<double, 3> len{1.0, 1.0, 1.0};
  for (int a = 0; a < dim && a < 3; ++a) {
    pts[a] = points;
    len[a] = box_length;
  }
  return make(dim, pts, len);
}

BoxGrid BoxGrid::make(int dim, const std::array<int, 3>& points,
                      const std::array<double, 3>& lengths) {
  if (dim != 2 && dim != 3) throw Error("BoxGrid: dim must be 2 or 3");
  BoxGrid g;
  g.dim = dim;
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (points[a] <= 0 || points[a] % 2 != 0)
        throw Error("BoxGrid: points per axis must be a positive even integer");
      if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
        throw Error("BoxGrid: box length must be positive and finite");
      g.n[a] = points[a];
      g.length[a] = lengths[a];
    } else {
      g.n[a] = 1;
      g.length[a] = 1.0;
    }
  }
  return g;
}

double BoxGrid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

double BoxGrid::fundamental(int axis) const {
  return axis < dim ? 2.0 * std::numbers::pi / length[axis] : 0.0;
}

std::array<int, 3> BoxGrid::position(std::size_t flat) const {
  const int i2 = static_cast<int>(flat % n[2]);
  flat /= n[2];
  const int i1 = static_cast<int>(flat % n[1]);
  const int i0 = static_cast<int>(flat / n[1]);
  return {i0, i1, i2};
}

Eigen::Vector3d BoxGrid::wavevector(std::size_t flat) const {
  const auto p = position(flat);
  return {wavenumber(0, p[0]), wavenumber(1, p[1]), wavenumber(2, p[2])};
}

std::size_t BoxGrid::conjugate_index(std::size_t flat) const {
  const auto p = position(flat);
  const auto neg = [&](int a) { return p[a] == 0 ? 0 : n[a] - p[a]; };
  return flat_index(neg(0), neg(1), neg(2));
}

double BoxGrid::max_wavenumber() const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double k = (n[a] / 2) * fundamental(a);
    s += k * k;
  }
  return std::sqrt(s);
}

double BoxGrid::min_wavenumber() const {
  double m = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) m = std::min(m, fundamental(a));
  return m;
}

std::string BoxGrid::describe() const {
  std::ostringstream os;
  os << dim << "D ";
  for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << n[a];
  os << " box ";
  for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << length[a];
  return os.str();
}

WavenumberTable::WavenumberTable(const BoxGrid& g) : grid(g) {
  const std::size_t size = g.size();
  for (auto& axis : k) axis.resize(static_cast<Eigen::Index>(size));
  k2.resize(static_cast<Eigen::Index>(size));
  keep.resize(static_cast<Eigen::Index>(size));
  std::size_t flat = 0;
  for (int i0 = 0; i0 < g.n[0]; ++i0)
    for (int i1 = 0; i1 < g.n[1]; ++i1)
      for (int i2 = 0; i2 < g.n[2]; ++i2, ++flat) {
        const int m[3] = {g.mode_index(0, i0), g.mode_index(1, i1), g.mode_index(2, i2)};
        bool inside = true;
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double ka = m[a] * g.fundamental(a);
          k[a](flat) = ka;
          s += ka * ka;
          if (a < g.dim && 3 * std::abs(m[a]) > g.n[a]) inside = false;
        }
        k2(flat) = s;
        keep(flat) = inside ? 1.0 : 0.0;
      }
}

}  // namespace spqg
