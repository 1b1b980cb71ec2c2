#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spqg/multiplier.hpp"
#include "spqg/wave_algebra.hpp"

using namespace spqg;
using testing::random_field;
using testing::rel_l2;

namespace {
const std::complex<double> I(0.0, 1.0);
}

TEST_CASE("physical params derive epsilon") {
  const PhysicalParams p = PhysicalParams::make(2.0, 0.1, 1.0);
  CHECK(p.gamma_bar == 0.5);
  CHECK(p.epsilon == doctest::Approx(0.2));
  CHECK_THROWS_AS(PhysicalParams::make(1.0, 0.1, 1.0), Error);
  CHECK_THROWS_AS(PhysicalParams::make(2.0, 0.0, 1.0), Error);
}

TEST_CASE("2D symbol entries") {
  const auto a0 = assemble_symbol_2d<double>(Eigen::Vector2d(0, 0), 1.0);
  Eigen::Matrix3cd expect = Eigen::Matrix3cd::Zero();
  expect(1, 2) = -1.0;
  expect(2, 1) = 1.0;
  CHECK(a0 == expect);
  const auto a = assemble_symbol_2d<double>(Eigen::Vector2d(1, 0), 2.0);
  CHECK(a(0, 1) == I);
  CHECK(a(1, 2) == -2.0);
  const Eigen::Matrix3cd h = -I * assemble_symbol_2d<double>(Eigen::Vector2d(0.3, -1.7), 1.3);
  CHECK((h - h.adjoint()).norm() == 0.0);
}

TEST_CASE("2D eigensystem") {
  auto e = eigendecompose_2d(Eigen::Vector2d(0, 0), 1.0);
  CHECK(e.frequencies(0) == 0.0);
  CHECK(e.frequencies(1) == doctest::Approx(1.0));
  CHECK(e.frequencies(2) == doctest::Approx(-1.0));
  e = eigendecompose_2d(Eigen::Vector2d(1.0, std::sqrt(2.0)), 1.0);
  CHECK(e.frequencies(1) == doctest::Approx(2.0));

  e = eigendecompose_2d(Eigen::Vector2d(1, 0), 1.0);
  const Eigen::Vector3cd d0 = e.vectors.col(0);
  const Eigen::Vector3cd ref = Eigen::Vector3cd(1.0, 0.0, I) / std::sqrt(2.0);
  CHECK(std::abs(std::abs(d0.dot(ref)) - 1.0) < 1e-14);
  CHECK((assemble_symbol_2d<double>(Eigen::Vector2d(1, 0), 1.0) * d0).norm() < 1e-15);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d eta(n(rng), n(rng));
    const double nu = 0.5 + std::abs(n(rng));
    const auto s = eigendecompose_2d(eta, nu);
    const auto a = assemble_symbol_2d<double>(eta, nu);
    CHECK((s.vectors.adjoint() * s.vectors - Eigen::Matrix3cd::Identity()).norm() < 1e-14);
    for (int j = 0; j < 3; ++j) CHECK((a * s.vectors.col(j) - I * s.frequencies(j) * s.vectors.col(j)).norm() < 1e-13);
  }
}

TEST_CASE("3D symbol and eigensystem") {
  auto e = eigendecompose_3d(Eigen::Vector3d(0, 0, 0), 1.0);
  CHECK(e.frequencies(0) == doctest::Approx(1.0));
  CHECK(std::abs(e.frequencies(1)) < 1e-14);
  CHECK(std::abs(e.frequencies(2)) < 1e-14);
  CHECK(e.frequencies(3) == doctest::Approx(-1.0));
  e = eigendecompose_3d(Eigen::Vector3d(0, 0, 2), 1.0);
  CHECK(e.frequencies(0) == doctest::Approx(2.0));
  CHECK(e.frequencies(1) == doctest::Approx(1.0));
  CHECK(e.frequencies(2) == doctest::Approx(-1.0));
  CHECK(e.frequencies(3) == doctest::Approx(-2.0));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Vector3d xi(n(rng), n(rng), t % 3 == 0 ? 0.0 : n(rng));
    const auto s = eigendecompose_3d(xi, 1.0);
    const Eigen::Matrix4cd h = -I * assemble_symbol_3d<double>(xi, 1.0);
    CHECK((h - h.adjoint()).norm() == 0.0);
    const Eigen::Matrix4cd rebuilt = s.vectors * s.frequencies.cast<std::complex<double>>().asDiagonal() * s.vectors.adjoint();
    CHECK((rebuilt - h).norm() < 1e-10);
    CHECK((s.vectors * s.vectors.adjoint() - Eigen::Matrix4cd::Identity()).norm() < 1e-10);
  }
}

TEST_CASE("2D projections on random fields") {
  const BoxGrid g = BoxGrid::cube(2, 64, 10.0);
  const WaveBasis basis(g, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField f = random_field(g, 3, seed);
    const SpectralField p0 = project(f, basis, Branch::Zero);
    const SpectralField pp = project(f, basis, Branch::Plus);
    const SpectralField pm = project(f, basis, Branch::Minus);
    CHECK(rel_l2(p0 + pp + pm, f) <= 1e-12);
    CHECK(rel_l2(project(p0, basis, Branch::Zero), p0) <= 1e-12);
    CHECK(sobolev_norm(project(pm, basis, Branch::Plus), 0.0) <= 1e-12 * sobolev_norm(f, 0.0));
    CHECK(p0.conjugate_symmetry_defect() < 1e-12 * p0.coeffs().cwiseAbs().maxCoeff());
    CHECK(rel_l2(project(f, basis, BranchSet::Fast), pp + pm) <= 1e-14);
  }
}

TEST_CASE("slow/fast identities") {
  const BoxGrid g = BoxGrid::cube(2, 64, 10.0);
  const double nu = 1.3;
  const WaveBasis basis(g, nu);
  const SpectralField f = random_field(g, 3, 42);
  const auto [slow, fast] = slow_fast_split(f, basis);
  const SpectralField as = slow.slice(0, 1), ws = slow.slice(1, 2);
  const SpectralField af = fast.slice(0, 1), wf = fast.slice(1, 2);
  const double scale = sobolev_norm(f, 1.0);
  CHECK(sobolev_norm(nu * perp(ws) + gradient(as), 0.0) <= 1e-10 * scale);
  CHECK(sobolev_norm(divergence(ws), 0.0) <= 1e-10 * scale);
  CHECK(sobolev_norm(curl_2d(wf) - nu * af, 0.0) <= 1e-10 * scale);
  const SpectralField pv = curl_2d(f.slice(1, 2)) - nu * f.slice(0, 1);
  const SpectralField pvs = curl_2d(ws) - nu * as;
  CHECK(rel_l2(pvs, pv) <= 1e-10);

  // Geostrophic data lies in the kernel.
  const SpectralField a = random_field(g, 1, 9);
  const SpectralField geo = SpectralField::stack(a, (1.0 / nu) * grad_perp(a));
  CHECK(rel_l2(project(geo, basis, Branch::Zero), geo) <= 1e-12);
  CHECK(sobolev_norm(slow_fast_split(geo, basis).second, 0.0) <= 1e-12 * sobolev_norm(geo, 0.0));
}

TEST_CASE("3D projections") {
  const BoxGrid g = BoxGrid::cube(3, 16, 6.0);
  const WaveBasis basis(g, 1.0);
  const SpectralField f = random_field(g, 4, 1);
  const SpectralField s = project(f, basis, BranchSet::Slow);
  const SpectralField fa = project(f, basis, BranchSet::Fast);
  CHECK(rel_l2(s + fa, f) <= 1e-12);
  CHECK(sobolev_norm(project(s, basis, BranchSet::Fast), 0.0) <= 1e-12 * sobolev_norm(f, 0.0));
  CHECK(s.conjugate_symmetry_defect() <= 1e-12 * s.coeffs().cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(project(f, basis, Branch::Zero), Error);
}

TEST_CASE("linear propagation") {
  const BoxGrid g = BoxGrid::cube(2, 32, 8.0);
  const PhysicalParams p = PhysicalParams::make(2.0, 0.05, 1.0);
  const WaveBasis basis(g, p.nu);
  const SpectralField f = random_field(g, 3, 4);
  CHECK(rel_l2(linear_propagate(f, 0.0, p, basis), f) <= 1e-15);
  const SpectralField a = linear_propagate(f, 1.0, p, basis);
  CHECK(std::abs(sobolev_norm(a, 0.0) / sobolev_norm(f, 0.0) - 1.0) <= 1e-12);
  const SpectralField ab = linear_propagate(linear_propagate(f, 0.3, p, basis), 0.7, p, basis);
  CHECK(rel_l2(ab, a) <= 1e-12);
  CHECK(a.conjugate_symmetry_defect() <= 1e-12 * a.coeffs().cwiseAbs().maxCoeff());

  // Mean mode: (w1, w2) rotates by gbar nu t / delta, a unchanged.
  SpectralField m(g, 3);
  m.coeffs()(0, 0) = 2.0;
  m.coeffs()(0, 1) = 1.0;
  m.coeffs()(0, 2) = 0.5;
  const double t = 0.37;
  const SpectralField r = linear_propagate(m, t, p, basis);
  const double ang = p.gamma_bar * p.nu * t / p.delta;
  // dw/dt = -(gbar/delta) nu (-w2, w1): rotation by -ang.
  CHECK(std::abs(r.coeffs()(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(r.coeffs()(0, 1) - (std::cos(ang) * 1.0 + std::sin(ang) * 0.5)) < 1e-13);
  CHECK(std::abs(r.coeffs()(0, 2) - (-std::sin(ang) * 1.0 + std::cos(ang) * 0.5)) < 1e-13);

  // Propagator with a passive trailing component.
  const Propagator prop(basis, p, 1.0);
  SpectralField four = SpectralField::stack(f, random_field(g, 1, 8));
  const SpectralField tracer = four.slice(3, 1);
  prop.apply(four);
  CHECK(rel_l2(four.slice(0, 3), a) <= 1e-13);
  CHECK(four.slice(3, 1).coeffs() == tracer.coeffs());
}
