#include <cmath>

#include "quadclip/oracles.hpp"
#include "quadclip/philox.hpp"

namespace quadclip {

namespace detail {

namespace {

constexpr double kBaryTol = 1e-10;

Vec3 ray_direction(int k) {
  static const Vec3 dirs[4] = {
      normalized(Vec3{1.0, std::sqrt(2.0) / 3, std::sqrt(5.0) / 7}),
      normalized(Vec3{-std::sqrt(3.0) / 5, 1.0, std::sqrt(7.0) / 11}),
      normalized(Vec3{std::sqrt(11.0) / 13, -std::sqrt(2.0) / 9, 1.0}),
      normalized(Vec3{-1.0, -std::sqrt(13.0) / 17, -std::sqrt(3.0) / 4}),
  };
  return dirs[k];
}

}  // namespace

RayTriangles prepare_triangles(const Polyhedron& p, const Vec3& r) {
  RayTriangles t;
  const auto& v = p.vertices();
  for (const auto& f : p.faces())
    for (const auto& loop : f.loops)
      for (std::size_t k = 1; k + 1 < loop.size(); ++k) {
        const Vec3& a = v[loop[0]];
        const Vec3 e1 = v[loop[k]] - a, e2 = v[loop[k + 1]] - a;
        const Vec3 P = cross(r, e2);
        const double det = dot(e1, P);
        if (std::fabs(det) <= 1e-14 * norm(e1) * norm(e2)) continue;
        const Vec3 pu = P / det, pv = cross(e1, r) / det, pt = cross(e1, e2) / det;
        const double c[13] = {pu.x, pu.y, pu.z, -dot(a, pu), pv.x, pv.y, pv.z, -dot(a, pv),
                              pt.x, pt.y, pt.z, -dot(a, pt), det < 0 ? 1.0 : -1.0};
        t.coef.insert(t.coef.end(), c, c + 13);
        ++t.count;
      }
  return t;
}

void classify_scalar(const RayTriangles& t, const double* x, const double* y, const double* z, std::size_t n,
                     double* winding, uint8_t* tie) {
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0;
    bool amb = false;
    for (std::size_t k = 0; k < t.count; ++k) {
      const double* c = &t.coef[13 * k];
      const double u = ((c[0] * x[i] + c[1] * y[i]) + c[2] * z[i]) + c[3];
      const double v = ((c[4] * x[i] + c[5] * y[i]) + c[6] * z[i]) + c[7];
      const double tau = ((c[8] * x[i] + c[9] * y[i]) + c[10] * z[i]) + c[11];
      const double s = 1.0 - (u + v);
      const bool near = u > -kBaryTol && v > -kBaryTol && s > -kBaryTol && tau > -kBaryTol;
      const bool edge = u < kBaryTol || v < kBaryTol || s < kBaryTol || tau < kBaryTol;
      if (near && edge) amb = true;
      if (u >= 0 && v >= 0 && s >= 0 && tau > 0) w += c[12];
    }
    winding[i] = w;
    tie[i] = amb ? 1 : 0;
  }
}

}  // namespace detail

McResult mc_moments(const Polyhedron& p, const Cylinder& c, const McConfig& cfg) {
  McResult res;
  if (p.empty() || cfg.samples == 0) return res;
  Vec3 lo, hi;
  p.bounds(lo, hi);
  const Vec3 ext = hi - lo;
  const double vol = ext.x * ext.y * ext.z;
  if (!(vol > 0)) return res;

  detail::RayTriangles tri[4];
  for (int k = 0; k < 4; ++k) tri[k] = detail::prepare_triangles(p, detail::ray_direction(k));
  const bool simd = detail::avx2_available();
  const Philox4x32::Key key{uint32_t(cfg.seed), uint32_t(cfg.seed >> 32)};

  constexpr std::size_t B = 256;
  double xs[B], ys[B], zs[B], wind[B];
  uint8_t tie[B];
  // fixed-size blocks keep the summation order independent of everything but the config
  double s[4] = {0, 0, 0, 0}, s2[4] = {0, 0, 0, 0};
  for (uint64_t base = 0; base < cfg.samples; base += B) {
    const std::size_t n = std::size_t(std::min<uint64_t>(B, cfg.samples - base));
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const uint64_t id = base + i;
      const auto r0 = Philox4x32::block({uint32_t(id), uint32_t(id >> 32), 0, uint32_t(cfg.stream)}, key);
      const auto r1 = Philox4x32::block({uint32_t(id), uint32_t(id >> 32), 1, uint32_t(cfg.stream)}, key);
      const Vec3 q{lo.x + ext.x * Philox4x32::to_unit(r0[0], r0[1]), lo.y + ext.y * Philox4x32::to_unit(r0[2], r0[3]),
                   lo.z + ext.z * Philox4x32::to_unit(r1[0], r1[1])};
      if (phi_eval(c, q) > 0) continue;
      xs[m] = q.x;
      ys[m] = q.y;
      zs[m] = q.z;
      ++m;
    }
    if (simd)
      detail::classify_avx2(tri[0], xs, ys, zs, m, wind, tie);
    else
      detail::classify_scalar(tri[0], xs, ys, zs, m, wind, tie);
    double bs[4] = {0, 0, 0, 0}, bs2[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < m; ++i) {
      double w = wind[i];
      for (int k = 1; tie[i] && k < 4; ++k) {
        uint8_t t2;
        detail::classify_scalar(tri[k], &xs[i], &ys[i], &zs[i], 1, &w, &t2);
        tie[i] = t2;
      }
      if (w == 0) continue;
      const double f[4] = {1, xs[i], ys[i], zs[i]};
      for (int k = 0; k < 4; ++k) {
        bs[k] += f[k];
        bs2[k] += f[k] * f[k];
      }
    }
    for (int k = 0; k < 4; ++k) {
      s[k] += bs[k];
      s2[k] += bs2[k];
    }
  }
  const double N = double(cfg.samples);
  double est[4];
  for (int k = 0; k < 4; ++k) {
    const double mean = s[k] / N;
    const double var = std::max(0.0, s2[k] / N - mean * mean);
    est[k] = vol * mean;
    res.stderr_[k] = vol * std::sqrt(var / N);
  }
  res.m = {est[0], {est[1], est[2], est[3]}};
  return res;
}

}  // namespace quadclip
