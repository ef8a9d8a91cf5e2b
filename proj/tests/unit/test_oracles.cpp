#include <cmath>
#include <random>

#include "doctest.h"
#include "quadclip/oracles.hpp"
#include "quadclip/philox.hpp"

using namespace quadclip;

namespace {

Polyhedron unit_cube_at(const Vec3& lo) {
  return transform(make_shape(ShapeKind::Cube, false), RigidTransform::translate(lo + Vec3{0.5, 0.5, 0.5}));
}

Polyhedron random_case(std::mt19937_64& rng, int i, Cylinder& c) {
  std::uniform_real_distribution<double> u(-0.5, 0.5), a(-M_PI, M_PI);
  const auto p = make_shape(ShapeKind(i % 4), true);
  c = Cylinder(0.2 + (u(rng) + 0.5), (i % 2 ? -1 : 1) * (0.3 + 3 * (u(rng) + 0.5)));
  return transform(p, RigidTransform::from_angles(a(rng), a(rng), a(rng), {u(rng), u(rng), u(rng)}));
}

}  // namespace

TEST_CASE("philox known answers") {
  using P = Philox4x32;
  CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(P::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  CHECK(P::to_unit(0, 0) == 0);
  CHECK(P::to_unit(~0u, ~0u) < 1);
}

TEST_CASE("scalar and AVX2 classification agree bitwise") {
  if (!detail::avx2_available()) {
    MESSAGE("AVX2 not available; only the scalar kernel is exercised");
    return;
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int s = 0; s < 4; ++s) {
    const auto p = make_shape(ShapeKind(s), false);
    const auto t = detail::prepare_triangles(p, normalized(Vec3{1, 0.3, 0.2}));
    const std::size_t n = 4099;
    std::vector<double> x(n), y(n), z(n), w1(n), w2(n);
    std::vector<uint8_t> t1(n), t2(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = u(rng);
      if (i % 7 == 0) z[i] = 0.5;  // on a cube face
      if (i % 11 == 0) x[i] = y[i] = z[i] = 0.25;  // on an inner wall of the hollow cube
    }
    detail::classify_scalar(t, x.data(), y.data(), z.data(), n, w1.data(), t1.data());
    detail::classify_avx2(t, x.data(), y.data(), z.data(), n, w2.data(), t2.data());
    int mism = 0;
    for (std::size_t i = 0; i < n; ++i) mism += (w1[i] != w2[i]) || (t1[i] != t2[i]);
    CHECK(mism == 0);
  }
}

TEST_CASE("ray-cast point classification") {
  const auto h = make_shape(ShapeKind::HollowCube, false);
  const auto t = detail::prepare_triangles(h, normalized(Vec3{1, std::sqrt(2.0) / 3, std::sqrt(5.0) / 7}));
  const double x[4] = {0.4, 0.0, 0.4, 0.9}, y[4] = {0.0, 0.0, 0.4, 0.0}, z[4] = {0.0, 0.0, 0.1, 0.0};
  double w[4];
  uint8_t tie[4];
  detail::classify_scalar(t, x, y, z, 4, w, tie);
  CHECK(w[0] != 0);  // in the wall
  CHECK(w[1] == 0);  // in the tunnel
  CHECK(w[2] != 0);
  CHECK(w[3] == 0);  // outside
}

TEST_CASE("mc_moments") {
  McConfig cfg;
  auto r = mc_moments(unit_cube_at({0, 5, 5}), Cylinder(1, 1), cfg);
  for (int k = 0; k < 4; ++k) {
    CHECK(r.m[k] == 0);
    CHECK(r.stderr_[k] == 0);
  }
  r = mc_moments(unit_cube_at({0, 0, 0}), Cylinder(10, 1), cfg);
  CHECK(std::fabs(r.m.m0 - 1) < 1e-12);
  r = mc_moments(unit_cube_at({0, 0, 0}), Cylinder(1, 1), cfg);
  CHECK(std::fabs(r.m.m0 - M_PI / 4) <= 4 * r.stderr_[0]);
  CHECK(r.stderr_[0] > 0);
  const auto r2 = mc_moments(unit_cube_at({0, 0, 0}), Cylinder(1, 1), cfg);
  CHECK(r2.m.m0 == r.m.m0);
  CHECK(r2.m.m1 == r.m.m1);
  cfg.stream = 1;
  CHECK(mc_moments(unit_cube_at({0, 0, 0}), Cylinder(1, 1), cfg).m.m0 != r.m.m0);
}

TEST_CASE("mc_moments brackets the closed form") {
  std::mt19937_64 rng(12);
  int inside = 0, total = 0;
  for (int i = 0; i < 24; ++i) {
    Cylinder c;
    const auto p = random_case(rng, i, c);
    const Moments m = clip_moments(p, c);
    const McResult r = mc_moments(p, c, {200000, 3, uint64_t(i)});
    for (int k = 0; k < 4; ++k) {
      ++total;
      inside += std::fabs(r.m[k] - m[k]) <= 4 * r.stderr_[k] + 1e-15;
    }
  }
  CHECK(inside >= total - 1);
}

TEST_CASE("unit_cube_reference") {
  CHECK(unit_cube_reference(0).m0 <= 1e-14);
  const auto k2 = unit_cube_reference(2);
  CHECK(std::fabs(k2.m0 - M_PI / 4) < 1e-15);
  CHECK(std::fabs(k2.m1.x - M_PI / 8) < 1e-15);
  CHECK(std::fabs(unit_cube_reference(3).m0 - (std::sqrt(3.0) / 4 + M_PI / 6)) < 1e-15);
  CHECK_THROWS_AS(unit_cube_reference(-0.1), Error);
  CHECK_THROWS_AS(unit_cube_reference(3.1), Error);
  double prev = -1;
  for (double k = 0; k <= 3; k += 0.01) {
    const double m0 = unit_cube_reference(k).m0;
    CHECK(m0 >= prev);
    prev = m0;
  }
}

TEST_CASE("amr_moments") {
  const auto cube = unit_cube_at({0, 0, 0});
  const Moments big = amr_moments(cube, Cylinder(10, 1), {3, true});
  CHECK(std::fabs(big.m0 - 1) < 1e-15);
  CHECK(std::fabs(big.m1.x - 0.5) < 1e-15);
  const Moments k3 = amr_moments(unit_cube_at({0, 0, -0.5}), Cylinder(1, 1), {12, true});
  CHECK(std::fabs(k3.m0 - 0.956611) < 1e-3);
  CHECK(std::fabs(k3.m0 - unit_cube_reference(3).m0) < 1e-6);
}

TEST_CASE("amr self-convergence") {
  std::mt19937_64 rng(13);
  int better = 0, total = 0;
  for (int i = 0; i < 20; ++i) {
    Cylinder c;
    const auto p = random_case(rng, i, c);
    const Moments m = clip_moments(p, c);
    double prev = -1;
    for (int L : {6, 8, 10}) {
      const double e = std::fabs(amr_moments(p, c, {L, true}).m0 - m.m0);
      if (prev >= 0) {
        ++total;
        better += e < prev || e < 1e-13;
      }
      prev = e;
    }
  }
  CHECK(better == total);
}
