#include "spqg/fourier_transform.hpp"

#include <cstdlib>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace spqg {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    fftw_init_threads();
    fftw_make_planner_thread_safe();
  });
}

}  // namespace

int configured_thread_count() {
  const char* env = std::getenv("SPQG_NUM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

struct FourierTransform::Impl {
  BoxGrid grid;
  std::size_t real_size = 0;
  std::size_t half_last = 0;  // n_last/2 + 1
  std::size_t half_size = 0;
  double* real_buf = nullptr;
  fftw_complex* half_buf = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Impl(const BoxGrid& g) : grid(g) {
    init_fftw_threads();
    const int last = g.dim - 1;
    real_size = g.size();
    half_last = static_cast<std::size_t>(g.n[last] / 2 + 1);
    half_size = real_size / g.n[last] * half_last;
    real_buf = fftw_alloc_real(real_size);
    half_buf = fftw_alloc_complex(half_size);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_plan_with_nthreads(configured_thread_count());
    int dims[3] = {g.n[0], g.n[1], g.n[2]};
    r2c = fftw_plan_dft_r2c(g.dim, dims, real_buf, half_buf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r(g.dim, dims, half_buf, real_buf, FFTW_ESTIMATE);
    if (!r2c || !c2r) throw Error("FourierTransform: FFTW planning failed for " + g.describe());
  }

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(real_buf);
    fftw_free(half_buf);
  }

  // Rows of the half spectrum: every index except the last axis.
  std::size_t rows() const { return real_size / grid.n[grid.dim - 1]; }
  int last_n() const { return grid.n[grid.dim - 1]; }
};

FourierTransform::FourierTransform(const BoxGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
FourierTransform::~FourierTransform() = default;
FourierTransform::FourierTransform(FourierTransform&&) noexcept = default;
FourierTransform& FourierTransform::operator=(FourierTransform&&) noexcept = default;

const BoxGrid& FourierTransform::grid() const { return impl_->grid; }

Eigen::ArrayXd FourierTransform::backward(const Eigen::Ref<const Eigen::VectorXcd>& spectrum) const {
  Impl& s = *impl_;
  if (spectrum.size() != static_cast<Eigen::Index>(s.real_size))
    throw Error("FourierTransform::backward: spectrum size mismatch");
  const std::size_t rows = s.rows();
  const std::size_t nl = static_cast<std::size_t>(s.last_n());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < s.half_last; ++j) {
      const Complex v = spectrum(static_cast<Eigen::Index>(r * nl + j));
      s.half_buf[r * s.half_last + j][0] = v.real();
      s.half_buf[r * s.half_last + j][1] = v.imag();
    }
  fftw_execute(s.c2r);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(s.real_size));
  const double scale = 1.0 / static_cast<double>(s.real_size);
  for (std::size_t i = 0; i < s.real_size; ++i) out(static_cast<Eigen::Index>(i)) = s.real_buf[i] * scale;
  return out;
}

Eigen::VectorXcd FourierTransform::forward(const Eigen::Ref<const Eigen::ArrayXd>& values) const {
  Impl& s = *impl_;
  if (values.size() != static_cast<Eigen::Index>(s.real_size))
    throw Error("FourierTransform::forward: sample count mismatch");
  for (std::size_t i = 0; i < s.real_size; ++i) s.real_buf[i] = values(static_cast<Eigen::Index>(i));
  fftw_execute(s.r2c);
  const BoxGrid& g = s.grid;
  const std::size_t nl = static_cast<std::size_t>(s.last_n());
  Eigen::VectorXcd out(static_cast<Eigen::Index>(s.real_size));
  // Rows are indexed by (i0) in 2D and (i0, i1) in 3D; the conjugate row
  // negates every leading index.
  const int lead = g.dim - 1;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    std::size_t conj_row;
    if (lead == 1) {
      const std::size_t i0 = r;
      conj_row = i0 == 0 ? 0 : g.n[0] - i0;
    } else {
      const std::size_t i0 = r / g.n[1];
      const std::size_t i1 = r % g.n[1];
      const std::size_t c0 = i0 == 0 ? 0 : g.n[0] - i0;
      const std::size_t c1 = i1 == 0 ? 0 : g.n[1] - i1;
      conj_row = c0 * g.n[1] + c1;
    }
    for (std::size_t j = 0; j < nl; ++j) {
      Complex v;
      if (j < s.half_last) {
        const auto& h = s.half_buf[r * s.half_last + j];
        v = Complex(h[0], h[1]);
      } else {
        const auto& h = s.half_buf[conj_row * s.half_last + (nl - j)];
        v = Complex(h[0], -h[1]);
      }
      out(static_cast<Eigen::Index>(r * nl + j)) = v;
    }
  }
  return out;
}

PhysicalField FourierTransform::to_physical(const SpectralField& field) const {
  if (!(field.grid() == impl_->grid)) throw Error("FourierTransform::to_physical: grid mismatch");
  PhysicalField out(static_cast<Eigen::Index>(impl_->real_size), field.components());
  for (int c = 0; c < field.components(); ++c) out.col(c) = backward(field.component(c));
  return out;
}

SpectralField FourierTransform::to_spectral(const PhysicalField& values) const {
  SpectralField out(impl_->grid, static_cast<int>(values.cols()));
  for (int c = 0; c < values.cols(); ++c) out.component(c) = forward(values.col(c));
  return out;
}

SpectralField resample(const SpectralField& field, const BoxGrid& target) {
  const BoxGrid& src = field.grid();
  if (src.dim != target.dim) throw Error("resample: dimension mismatch");
  for (int a = 0; a < src.dim; ++a)
    if (src.length[a] != target.length[a]) throw Error("resample: box lengths differ");
  SpectralField out(target, field.components());
  const double scale = static_cast<double>(target.size()) / static_cast<double>(src.size());
  for (std::size_t flat = 0; flat < src.size(); ++flat) {
    const auto p = src.position(flat);
    int q[3] = {0, 0, 0};
    bool keep = true;
    for (int a = 0; a < 3; ++a) {
      const int m = src.mode_index(a, p[a]);
      if (a < src.dim) {
        // Nyquist modes of either grid have no unambiguous partner.
        if (2 * std::abs(m) >= src.n[a] || 2 * std::abs(m) >= target.n[a]) keep = false;
        q[a] = m < 0 ? m + target.n[a] : m;
      }
    }
    if (!keep) continue;
    out.coeffs().row(static_cast<Eigen::Index>(target.flat_index(q[0], q[1], q[2]))) =
        scale * field.coeffs().row(static_cast<Eigen::Index>(flat));
  }
  return out;
}

SpectralField zero_pad(const SpectralField& field, int factor) {
  if (factor < 1) throw Error("zero_pad: factor must be >= 1");
  const BoxGrid& g = field.grid();
  std::array<int, 3> n = g.n;
  for (int a = 0; a < g.dim; ++a) n[a] *= factor;
  return resample(field, BoxGrid::make(g.dim, n, g.length));
}

}  // namespace spqg
