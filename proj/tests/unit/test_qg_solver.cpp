#include <doctest.h>

#include "helpers.hpp"
#include "spqg/fourier_transform.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/qg_solver.hpp"
#include "spqg/scaling_fit.hpp"

using namespace spqg;
using testing::cos_mode;
using testing::rel_l2;

TEST_CASE("initial potential vorticity") {
  const BoxGrid g = BoxGrid::cube(2, 32, 10.0);
  const double nu = 1.5;
  const SpectralField b0 = random_band_limited(g, 1, 1, 0.5, 3.0, 1.0);
  const SpectralField uh0 = (1.0 / nu) * grad_perp(b0);
  const QGState s = init_from_data(b0, uh0, SpectralField(g, 1), nu);
  const WavenumberTable table(g);
  SpectralField expect = b0;
  expect.coeffs().col(0).array() *= -(table.k2 + nu * nu) / nu;
  CHECK(rel_l2(s.q, expect) <= 1e-13);

  const QGState z = init_from_data(SpectralField(g, 1), SpectralField(g, 2), SpectralField(g, 1), nu);
  CHECK(sobolev_norm(z.q, 0.0) == 0.0);

  // Fast-branch data carries no potential vorticity.
  const WaveBasis basis(g, nu);
  const SpectralField fast = project(random_band_limited(g, 3, 2, 0.0, 3.0, 1.0), basis, BranchSet::Fast);
  const QGState f = init_from_data(fast.slice(0, 1), fast.slice(1, 2), SpectralField(g, 1), nu);
  CHECK(sobolev_norm(f.q, 0.0) <= 1e-13 * sobolev_norm(fast, 1.0));
  const Geostrophic lim = invert_pv(f.q, nu);
  CHECK(sobolev_norm(lim.b, 0.0) <= 1e-13 * sobolev_norm(fast, 1.0));
}

TEST_CASE("pv inversion") {
  const BoxGrid g = BoxGrid::cube(2, 16, 2.0 * M_PI);
  CHECK(sobolev_norm(invert_pv(SpectralField(g, 1), 1.0).b, 0.0) == 0.0);
  SpectralField q(g, 1);
  const auto at = static_cast<Eigen::Index>(g.flat_index(1, 0, 0));
  q.coeffs()(at, 0) = 1.0;
  CHECK(invert_pv(q, 1.0).b.coeffs()(at, 0) == std::complex<double>(-0.5, 0.0));

  const SpectralField r = random_band_limited(g, 1, 3, 0.0, 5.0, 1.0);
  const Geostrophic gs = invert_pv(r, 0.8);
  CHECK(rel_l2(curl_2d(gs.uh) - 0.8 * gs.b, r) <= 1e-12);
}

TEST_CASE("steady states") {
  const BoxGrid g = BoxGrid::cube(2, 128, 20.0);
  const double nu = 1.0;
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 1.0;
  cfg.snapshot_stride = 100;

  const QGState vortex{gaussian_bump(g, 1.0, 1.0), SpectralField(g, 1), 0.0};
  const QGTrajectory tv = solve_qg(vortex, cfg, nu);
  REQUIRE(tv.ok());
  CHECK(rel_l2(tv.snapshots.back().q, tv.snapshots.front().q) <= 1e-8);

  const QGState mode{cos_mode(g, 1, 0, 2, 3), SpectralField(g, 1), 0.0};
  const QGTrajectory tm = solve_qg(mode, cfg, nu);
  CHECK(rel_l2(tm.snapshots.back().q, tm.snapshots.front().q) <= 1e-13);

  const QGTrajectory tz = solve_qg(QGState{SpectralField(g, 1), SpectralField(g, 1), 0.0}, cfg, nu);
  CHECK(sobolev_norm(tz.snapshots.back().q, 0.0) == 0.0);
}

TEST_CASE("two-mode triad") {
  const BoxGrid g = BoxGrid::cube(2, 32, 2.0 * M_PI);
  const double nu = 1.2, A = 0.7;
  const int jk = 1, jl = 2;
  const double k = jk * g.fundamental(0), l = jl * g.fundamental(1);
  const SpectralField q = cos_mode(g, 1, 0, jk, 0) + cos_mode(g, 1, 0, 0, jl, A);
  const QGSystem sys(g, nu);
  const SpectralField rate = sys.rhs(SpectralField::stack(q, SpectralField(g, 1))).slice(0, 1);

  const FourierTransform fft(g);
  PhysicalField x(static_cast<Eigen::Index>(g.size()), 1);
  const double c = -A * k * l * (1.0 / (nu * nu + l * l) - 1.0 / (nu * nu + k * k));
  for (int i0 = 0; i0 < g.n[0]; ++i0)
    for (int i1 = 0; i1 < g.n[1]; ++i1)
      x(static_cast<Eigen::Index>(g.flat_index(i0, i1, 0)), 0) =
          c * std::sin(k * i0 * g.spacing(0)) * std::sin(l * i1 * g.spacing(1));
  CHECK(rel_l2(rate, fft.to_spectral(x)) <= 1e-13);
}

TEST_CASE("fourth-order self-convergence") {
  const BoxGrid g = BoxGrid::cube(2, 32, 8.0 * M_PI);
  const QGState s0{localized_random(g, 1, 4, 0.5, 2.0, 3.0, 1.0), localized_random(g, 1, 5, 0.5, 2.0, 3.0, 0.5), 0.0};
  const auto run = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 0.5;
    cfg.cfl = 1e9;
    cfg.snapshot_stride = 1000;
    const auto& last = solve_qg(s0, cfg, 1.0).snapshots.back();
    return SpectralField::stack(last.q, last.u3);
  };
  const SpectralField ref = run(0.00625);
  std::vector<std::pair<double, double>> pts;
  for (double dt : {0.05, 0.025, 0.0125}) pts.emplace_back(dt, sobolev_norm(run(dt) - ref, 0.0));
  CHECK(fit_scaling(pts).exponent == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}
