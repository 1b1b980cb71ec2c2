#include <doctest.h>

#include "helpers.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/solver3d.hpp"

using namespace spqg;
using testing::rel_l2;

namespace {

SpectralField constant(const BoxGrid& g, int comps, const std::vector<double>& values) {
  SpectralField f(g, comps);
  for (int c = 0; c < comps; ++c) f.coeffs()(0, c) = values[static_cast<std::size_t>(c)] * static_cast<double>(g.size());
  return f;
}

SpectralField cos_x(const BoxGrid& g, int comps, int c, int j) {
  SpectralField f(g, comps);
  const double n = static_cast<double>(g.size());
  f.coeffs()(static_cast<Eigen::Index>(g.flat_index(j, 0, 0)), c) = 0.5 * n;
  f.coeffs()(static_cast<Eigen::Index>(g.flat_index(g.n[0] - j, 0, 0)), c) = 0.5 * n;
  return f;
}

}  // namespace

TEST_CASE("extension to 3D") {
  const BoxGrid g3 = BoxGrid::make(3, {16, 16, 8}, {6.0, 6.0, 3.0});
  const BoxGrid g2 = horizontal_grid(g3);
  CHECK(g2.dim == 2);
  CHECK(g2.n[1] == 16);
  const SpectralField c2 = constant(g2, 1, {2.5});
  const SpectralField c3 = extend_2d_to_3d(c2, g3);
  CHECK(rel_l2(c3, constant(g3, 1, {2.5})) <= 1e-15);

  const SpectralField f2 = random_band_limited(g2, 2, 1, 0.0, 5.0, 1.0);
  const SpectralField f3 = extend_2d_to_3d(f2, g3);
  CHECK(sobolev_norm(derivative(f3, 2), 0.0) == 0.0);
  CHECK(sobolev_norm(f3, 1.5) == doctest::Approx(sobolev_norm(f2, 1.5) * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(f3.conjugate_symmetry_defect() < 1e-13);
}

TEST_CASE("3D nonlinear term") {
  const BoxGrid g = BoxGrid::cube(3, 16, 2.0 * M_PI);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  CHECK(sobolev_norm(nonlinear_rhs_3d(SpectralField(g, 4), p), 0.0) == 0.0);
  CHECK(sobolev_norm(nonlinear_rhs_3d(constant(g, 4, {3.0, 0.0, 0.0, 0.0}), p), 0.0) == 0.0);

  const int j = 2;
  const double k = j * g.fundamental(0);
  const SpectralField out = nonlinear_rhs_3d(cos_x(g, 4, 0, j), p);
  const SpectralField sin2 = (-1.0 / (2.0 * k)) * derivative(cos_x(g, 1, 0, 2 * j), 0);
  CHECK(rel_l2(out.slice(1, 1), (p.gamma_bar * k / 2.0) * sin2) <= 1e-13);
  CHECK(sobolev_norm(out.slice(0, 1), 0.0) + sobolev_norm(out.slice(2, 2), 0.0) < 1e-12);
}

TEST_CASE("coupling term") {
  const BoxGrid g3 = BoxGrid::cube(3, 16, 2.0 * M_PI);
  const BoxGrid g2 = horizontal_grid(g3);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  const SpectralField v = random_band_limited(g3, 4, 2, 0.0, 4.0, 1.0);
  CHECK(sobolev_norm(coupling_rhs(v, ForcingContext::zero(g3), 0.3, p), 0.0) == 0.0);

  // Uniform w = (c, 0, 0): G(V) = -c d1 V.
  const double c = 0.8;
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 0.1;
  const State2D uniform = State2D::from_parts(constant(g2, 3, {0.0, c, 0.0}), SpectralField(g2, 1));
  const Trajectory2D traj = solve_intermediate(uniform, cfg, p);
  const ForcingContext ctx(traj, p, g3);
  const SpectralField g = coupling_rhs(v, ctx, 0.0, p);
  CHECK(rel_l2(g, (-c) * derivative(v, 0)) <= 1e-13);
  CHECK(sobolev_norm(coupling_rhs(SpectralField(g3, 4), ctx, 0.05, p), 0.0) == 0.0);
  CHECK_THROWS_AS(ctx.state_at(0.2), Error);
}

TEST_CASE("forcing interpolation") {
  const BoxGrid g3 = BoxGrid::make(3, {32, 32, 4}, {8.0 * M_PI, 8.0 * M_PI, 2.0});
  const BoxGrid g2 = horizontal_grid(g3);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  const State2D s0 = State2D::from_parts(localized_random(g2, 3, 3, 0.5, 2.0, 3.0, 0.3),
                                         localized_random(g2, 1, 4, 0.5, 2.0, 3.0, 0.3));
  SolverConfig coarse;
  coarse.dt = 0.02;
  coarse.t_final = 0.2;
  const Trajectory2D tc = solve_intermediate(s0, coarse, p);
  const ForcingContext ctx(tc, p, g3);
  for (std::size_t i = 0; i < tc.snapshots.size(); ++i)
    CHECK(ctx.state_at(tc.snapshots[i].time).coeffs() == tc.snapshots[i].fields.coeffs());

  // Mid-interval values against a run that stores them.
  SolverConfig fine = coarse;
  fine.dt = 0.01;
  const Trajectory2D tf = solve_intermediate(s0, fine, p);
  double worst = 0.0;
  for (std::size_t i = 1; i < tf.snapshots.size(); i += 2)
    worst = std::max(worst, rel_l2(ctx.state_at(tf.snapshots[i].time), tf.snapshots[i].fields));
  CHECK(worst <= 1e-5);
}

TEST_CASE("perturbation solver") {
  const BoxGrid g3 = BoxGrid::cube(3, 16, 4.0 * M_PI);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  SolverConfig cfg;
  cfg.dt = 0.02;
  cfg.t_final = 1.0;
  cfg.snapshot_stride = 50;
  const Trajectory3D z = solve_perturbed(State3D::zero(g3), ForcingContext::zero(g3), cfg, p);
  REQUIRE(z.ok());
  CHECK(sobolev_norm(z.snapshots.back().fields, 0.0) == 0.0);

  State3D v0 = State3D::zero(g3);
  v0.fields = localized_random(g3, 4, 8, 0.5, 2.0, 2.0, 1e-3);
  const Trajectory3D t = solve_perturbed(v0, ForcingContext::zero(g3), cfg, p);
  REQUIRE(t.ok());
  const double l0 = sobolev_norm(t.snapshots.front().fields, 0.0);
  CHECK(std::abs(sobolev_norm(t.snapshots.back().fields, 0.0) / l0 - 1.0) <= 1e-4);

  const Trajectory2D short2 = [&] {
    SolverConfig c2 = cfg;
    c2.t_final = 0.5;
    return solve_intermediate(State2D::zero(horizontal_grid(g3)), c2, p);
  }();
  CHECK_THROWS_AS(solve_perturbed(v0, ForcingContext(short2, p, g3), cfg, p), Error);
}

TEST_CASE("reconstruction") {
  const BoxGrid g3 = BoxGrid::cube(3, 8, 1.0);
  const BoxGrid g2 = horizontal_grid(g3);
  State2D two = State2D::from_parts(random_band_limited(g2, 3, 1, 0.0, 20.0, 1.0), SpectralField(g2, 1));
  two.time = 0.5;
  State3D three = State3D::zero(g3);
  three.time = 0.5;
  CHECK(rel_l2(reconstruct_full(two, three, 0.01), extend_2d_to_3d(two.fields, g3)) == 0.0);
  three.fields = random_band_limited(g3, 4, 2, 0.0, 20.0, 1.0);
  State2D none = State2D::zero(g2);
  none.time = 0.5;
  CHECK(rel_l2(reconstruct_full(none, three, 0.01), three.fields) == 0.0);
  three.time = 0.6;
  CHECK_THROWS_AS(reconstruct_full(two, three, 0.01), Error);

  const double n = static_cast<double>(g3.size());
  const PhysicalParams p2 = PhysicalParams::make(2.0, 0.1, 1.0);
  CHECK(reconstruct_density(SpectralField(g3, 1), p2).coeffs()(0, 0).real() / n == doctest::Approx(0.25));
  CHECK(reconstruct_density(constant(g3, 1, {1.0}), p2).coeffs()(0, 0).real() / n == doctest::Approx(0.3025));
  const PhysicalParams p3 = PhysicalParams::make(3.0, 0.1, 1.0);
  const SpectralField b = random_band_limited(g3, 1, 3, 0.0, 20.0, 1.0);
  SpectralField lin = p3.delta * b;
  lin.coeffs()(0, 0) += n;
  CHECK(rel_l2(reconstruct_density(b, p3), lin) <= 1e-14);
  CHECK_THROWS_AS(reconstruct_density(constant(g3, 1, {-20.0}), p2), Error);
}
