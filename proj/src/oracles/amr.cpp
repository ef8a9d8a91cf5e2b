#include <algorithm>
#include <cmath>

#include "quadclip/oracles.hpp"

namespace quadclip {

namespace {

struct Box {
  Vec3 lo, hi;
  double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }
};

// range of phi over [y0, y1] x [z0, z1]; exact since phi separates into monotone pieces in y^2, z^2
void phi_range(const Cylinder& c, double y0, double y1, double z0, double z1, double& lo, double& hi) {
  auto sq = [](double a, double b, double& mn, double& mx) {
    mn = (a <= 0 && b >= 0) ? 0.0 : std::min(a * a, b * b);
    mx = std::max(a * a, b * b);
  };
  double ymn, ymx, zmn, zmx;
  sq(y0, y1, ymn, ymx);
  sq(z0, z1, zmn, zmx);
  const double a2 = c.alpha * c.alpha;
  if (c.beta > 0) {
    lo = c.beta * ymn + zmn - a2;
    hi = c.beta * ymx + zmx - a2;
  } else {
    lo = c.beta * ymx + zmn - a2;
    hi = c.beta * ymn + zmx - a2;
  }
}

// Newton steps along the gradient towards phi = 0
bool project(const Cylinder& c, Vec3 q, Vec3& out) {
  for (int it = 0; it < 30; ++it) {
    const Vec3 g = phi_grad(c, q);
    const double g2 = norm2(g);
    if (!(g2 > 0)) return false;
    const double f = phi_eval(c, q);
    q -= g * (f / g2);
    if (std::fabs(f) <= 1e-15 * c.alpha * c.alpha) break;
  }
  out = q;
  return std::isfinite(q.x + q.y + q.z);
}

struct Area {
  double a = 0, ay = 0, az = 0;
};

struct P2 {
  double y, z;
};

Area polygon_area(const std::vector<P2>& p) {
  Area r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const P2 &u = p[i], &v = p[(i + 1) % p.size()];
    const double cr = u.y * v.z - v.y * u.z;
    r.a += cr;
    r.ay += (u.y + v.y) * cr;
    r.az += (u.z + v.z) * cr;
  }
  r.a /= 2;
  r.ay /= 6;
  r.az /= 6;
  return r;
}

class Amr {
 public:
  Amr(const Cylinder& c, const AmrConfig& cfg) : c_(c), cfg_(cfg) {}

  void cell(const Polyhedron& piece, const Box& b, int level);
  Moments result() const { return acc_; }

 private:
  const Cylinder& c_;
  const AmrConfig& cfg_;
  Moments acc_;

  void leaf3(const Polyhedron& piece, const Box& b);
  Area rect(double y0, double y1, double z0, double z1, int level);
};

void Amr::leaf3(const Polyhedron& piece, const Box& b) {
  const Vec3 ctr = (b.lo + b.hi) * 0.5;
  Vec3 q;
  if (!cfg_.tangent_plane_leaf || !project(c_, ctr, q)) {
    if (phi_eval(c_, ctr) <= 0) acc_ += polyhedron_moments(piece);
    return;
  }
  const Vec3 n = normalized(phi_grad(c_, q));
  acc_ += polyhedron_moments(clip_by_halfspace(piece, Plane{n, dot(n, q)}));
}

Area Amr::rect(double y0, double y1, double z0, double z1, int level) {
  double lo, hi;
  phi_range(c_, y0, y1, z0, z1, lo, hi);
  if (lo >= 0) return {};
  if (hi <= 0) {
    const double A = (y1 - y0) * (z1 - z0);
    return {A, A * (y0 + y1) / 2, A * (z0 + z1) / 2};
  }
  if (level >= cfg_.max_levels) {
    const Vec3 ctr{0, (y0 + y1) / 2, (z0 + z1) / 2};
    Vec3 q;
    std::vector<P2> poly{{y0, z0}, {y1, z0}, {y1, z1}, {y0, z1}};
    if (!cfg_.tangent_plane_leaf || !project(c_, ctr, q)) {
      if (phi_eval(c_, ctr) <= 0) return polygon_area(poly);
      return {};
    }
    const Vec3 g = phi_grad(c_, q);
    // keep g.(x - q) <= 0
    std::vector<P2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P2 &u = poly[i], &v = poly[(i + 1) % poly.size()];
      const double du = g.y * (u.y - q.y) + g.z * (u.z - q.z);
      const double dv = g.y * (v.y - q.y) + g.z * (v.z - q.z);
      if (du <= 0) out.push_back(u);
      if ((du < 0 && dv > 0) || (du > 0 && dv < 0)) {
        const double t = du / (du - dv);
        out.push_back({u.y + t * (v.y - u.y), u.z + t * (v.z - u.z)});
      }
    }
    if (out.size() < 3) return {};
    return polygon_area(out);
  }
  const double ym = (y0 + y1) / 2, zm = (z0 + z1) / 2;
  Area r;
  for (const Area& s : {rect(y0, ym, z0, zm, level + 1), rect(ym, y1, z0, zm, level + 1),
                        rect(y0, ym, zm, z1, level + 1), rect(ym, y1, zm, z1, level + 1)}) {
    r.a += s.a;
    r.ay += s.ay;
    r.az += s.az;
  }
  return r;
}

void Amr::cell(const Polyhedron& piece, const Box& b, int level) {
  if (piece.empty()) return;
  Vec3 plo, phi_;
  piece.bounds(plo, phi_);
  double lo, hi;
  phi_range(c_, plo.y, phi_.y, plo.z, phi_.z, lo, hi);
  if (lo >= 0) return;
  if (hi <= 0) {
    acc_ += polyhedron_moments(piece);
    return;
  }
  const double bv = b.volume();
  const Moments pm = polyhedron_moments(piece);
  if (pm.m0 >= (1 - 1e-12) * bv) {
    // the piece is the whole cell and phi does not depend on x
    const Area A = rect(b.lo.y, b.hi.y, b.lo.z, b.hi.z, level);
    const double Lx = b.hi.x - b.lo.x;
    acc_ += Moments{Lx * A.a, {A.a * (b.hi.x * b.hi.x - b.lo.x * b.lo.x) / 2, Lx * A.ay, Lx * A.az}};
    return;
  }
  if (level >= cfg_.max_levels) {
    leaf3(piece, b);
    return;
  }
  const Vec3 mid = (b.lo + b.hi) * 0.5;
  const Plane px{{1, 0, 0}, mid.x}, py{{0, 1, 0}, mid.y}, pz{{0, 0, 1}, mid.z};
  for (int i = 0; i < 2; ++i) {
    const Polyhedron a = clip_by_halfspace(piece, i ? px.flipped() : px);
    if (a.empty()) continue;
    for (int j = 0; j < 2; ++j) {
      const Polyhedron ab = clip_by_halfspace(a, j ? py.flipped() : py);
      if (ab.empty()) continue;
      for (int k = 0; k < 2; ++k) {
        Polyhedron abc = clip_by_halfspace(ab, k ? pz.flipped() : pz);
        if (abc.empty()) continue;
        Box cb;
        cb.lo = {i ? mid.x : b.lo.x, j ? mid.y : b.lo.y, k ? mid.z : b.lo.z};
        cb.hi = {i ? b.hi.x : mid.x, j ? b.hi.y : mid.y, k ? b.hi.z : mid.z};
        cell(abc, cb, level + 1);
      }
    }
  }
}

}  // namespace

Moments amr_moments(const Polyhedron& p, const Cylinder& c, const AmrConfig& cfg) {
  if (p.empty()) return {};
  Box b;
  p.bounds(b.lo, b.hi);
  Amr amr(c, cfg);
  amr.cell(p, b, 0);
  return amr.result();
}

}  // namespace quadclip
