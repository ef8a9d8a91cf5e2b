#include <cmath>

#include "../detail/engine.hpp"
#include "quadclip/quadric.hpp"

namespace quadclip {

Cylinder::Cylinder(double a, double b) : alpha(a), beta(b) {
  if (!(a > 0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidCylinder, "alpha must be positive");
  if (b == 0 || !std::isfinite(b)) throw Error(ErrorCode::InvalidCylinder, "beta must be nonzero");
}

Vec3 RationalArc::point(double t) const {
  const double b0 = (1 - t) * (1 - t), b1 = 2 * w * t * (1 - t), b2 = t * t;
  return (p0 * b0 + xstar * b1 + p1 * b2) / (b0 + b1 + b2);
}

double phi_eval(const Cylinder& c, const Vec3& x) { return c.beta * x.y * x.y + x.z * x.z - c.alpha * c.alpha; }

Vec3 phi_grad(const Cylinder& c, const Vec3& x) { return {0, 2 * c.beta * x.y, 2 * x.z}; }

double surface_z(const Cylinder& c, double y) {
  const double h2 = c.alpha * c.alpha - c.beta * y * y;
  if (h2 < 0) throw Error(ErrorCode::OutOfDomain, "y outside the elliptic strip");
  return std::sqrt(h2);
}

std::vector<double> intersect_edge(const Cylinder& c, const Vec3& a, const Vec3& b, const RobustnessConfig& cfg) {
  const detail::Cyl<double> cy(c);
  const auto r = detail::edge_roots(cy, a, b, cfg.eps_tangent);
  if (r.tangent) throw Error(ErrorCode::TangencyAmbiguous, "edge is tangent to the surface");
  std::vector<double> out;
  for (int k = 0; k < r.n; ++k)
    if (r.t[k] > 0 && r.t[k] < 1) out.push_back(r.t[k]);
  return out;
}

std::vector<RationalArc> build_arc(const Cylinder& c, const Vec3& p0, const Vec3& p1, const Plane& face_plane) {
  if (norm(p1 - p0) <= 1e-14 * std::max(1.0, norm(p0))) throw Error(ErrorCode::DegenerateConic, "zero-length arc");
  const Vec3 n = face_plane.normal;
  const bool conic = std::fabs(n.x) > 1e-12;
  std::vector<detail::ArcT<double>> arcs;
  const detail::Cyl<double> cy(c);
  if (detail::build_arc_t(cy, n, face_plane.offset, conic, p0, p1, arcs) != detail::Fault::None)
    throw Error(ErrorCode::DegenerateConic, "conic arc cannot be represented");
  std::vector<RationalArc> out;
  for (const auto& a : arcs) out.push_back({a.p0, a.p1, a.xs, a.w, -1});
  return out;
}

Polyhedron nudge(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg, int* attempts) {
  std::vector<Vec3> v = p.vertices();
  const double dist = cfg.eps_nudge * p.diameter();
  const detail::Tol tol{cfg.eps_corner, cfg.eps_tangent};
  const detail::Cyl<double> cy(c);
  for (int attempt = 0;; ++attempt) {
    std::vector<int> bad;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::fabs(cy.phi(v[i])) < tol.eps_corner * cy.a2) bad.push_back(int(i));
    for (const auto& f : p.faces())
      for (const auto& loop : f.loops)
        for (std::size_t k = 0; k < loop.size(); ++k) {
          const int a = loop[k], b = loop[(k + 1) % loop.size()];
          if (a > b) continue;
          if (detail::edge_roots(cy, v[a], v[b], cfg.eps_tangent).tangent) {
            bad.push_back(a);
            bad.push_back(b);
          }
        }
    if (bad.empty()) {
      if (attempts) *attempts = attempt;
      return attempt == 0 ? p : with_vertices(p, std::move(v));
    }
    if (attempt >= cfg.max_nudge_attempts) throw Error(ErrorCode::NudgeExhausted, "nudging did not converge");
    detail::nudge_vertices(v, bad, attempt, dist, false);
  }
}

}  // namespace quadclip
