#include <cmath>
#include <map>

#include "../detail/engine.hpp"
#include "quadclip/moments.hpp"

namespace quadclip {

double op_A(const Vec3& a, const Vec3& b, const Vec3& c) { return detail::op_A(a, b, c); }
double op_A_dagger(const Vec3& a, const Vec3& b, const Vec3& c) { return detail::op_A_dagger(a, b, c); }
Vec4 op_B1(const Vec3& a, const Vec3& b, const Vec3& c) { return detail::op_B1(a, b, c); }
Vec4 op_B2(const Vec3& a, const Vec3& b) { return detail::op_B2(a, b); }

namespace {

using detail::Fault;
using detail::FaultInfo;

[[noreturn]] void raise(const FaultInfo& f) {
  if (f.fault == Fault::Degenerate) throw Error(ErrorCode::DegenerateConic, "degenerate conic on a face");
  throw Error(ErrorCode::TangencyAmbiguous, "ill-posed intersection; nudge the input first");
}

Moments to_moments(const detail::Vec4T<double>& a) { return {a[0], {a[1], a[2], a[3]}}; }

template <class T> Moments to_moments_t(const detail::Vec4T<T>& a) {
  return {double(a[0]), {double(a[1]), double(a[2]), double(a[3])}};
}

/* One z >= 0 piece, with nudge retries. */
Moments upper(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg, ClipStats& st, bool zeroth) {
  if (p.empty()) return {};
  const double diam = p.diameter();
  if (!cfg.extended_precision) {
    std::vector<Vec3> v = p.vertices();
    const detail::Tol tol{cfg.eps_corner, cfg.eps_tangent};
    for (int attempt = 0;; ++attempt) {
      detail::UpperEngine<double> eng(v, p.faces(), c, tol);
      detail::Vec4T<double> acc;
      const FaultInfo f = eng.run(zeroth, acc);
      if (f.ok()) return to_moments(acc);
      if (attempt >= cfg.max_nudge_attempts) throw Error(ErrorCode::NudgeExhausted, "nudging did not converge");
      detail::nudge_vertices(v, f.vertices, attempt, cfg.eps_nudge * diam, true);
      ++st.nudge_count;
    }
  }
  {
    detail::UpperEngine<double> eng(p.vertices(), p.faces(), c, {cfg.eps_corner, cfg.eps_tangent});
    detail::Vec4T<double> acc;
    if (eng.run(zeroth, acc).ok()) return to_moments(acc);
  }
  st.extended = true;
  std::vector<Vec3T<quad>> v;
  v.reserve(p.vertices().size());
  for (const auto& x : p.vertices()) v.emplace_back(x);
  const double e128 = num<quad>::eps_d;
  const detail::Tol tol{1e2 * e128, 1e6 * e128};
  const quad dist = quad(1e10) * num<quad>::eps * quad(diam);
  for (int attempt = 0;; ++attempt) {
    detail::UpperEngine<quad> eng(v, p.faces(), c, tol);
    detail::Vec4T<quad> acc;
    const FaultInfo f = eng.run(zeroth, acc);
    if (f.ok()) return to_moments_t(acc);
    if (attempt >= cfg.max_nudge_attempts) throw Error(ErrorCode::NudgeExhausted, "nudging did not converge");
    detail::nudge_vertices(v, f.vertices, attempt, dist, true);
    ++st.nudge_count;
  }
}

}  // namespace

std::vector<ClippedFace> build_clipped_faces(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg) {
  detail::UpperEngine<double> eng(p.vertices(), p.faces(), c, {cfg.eps_corner, cfg.eps_tangent});
  std::vector<detail::FaceWork<double>> works;
  detail::Vec4T<double> acc;
  const FaultInfo f = eng.run(false, acc, &works);
  if (!f.ok()) raise(f);

  std::vector<ClippedFace> out;
  for (std::size_t fi = 0; fi < works.size(); ++fi) {
    const auto& w = works[fi];
    if (w.segs.empty() && w.pairs.empty()) continue;
    // every node has exactly one outgoing item: a straight segment or an arc group
    struct Item {
      int to;
      std::vector<ClippedEdge> edges;
    };
    std::map<int, Item> next;
    for (const auto& s : w.segs) next[s.na] = {s.nb, {{s.a, s.b, false, std::nullopt}}};
    for (std::size_t k = 0; k < w.pairs.size(); ++k) {
      const auto& e = w.cr[w.pairs[k].first];
      const auto& g = w.cr[w.pairs[k].second];
      Item it{g.node, {}};
      for (const auto& a : w.arcs[k])
        it.edges.push_back({a.p0, a.p1, true, RationalArc{a.p0, a.p1, a.xs, a.w, int(fi)}});
      next[e.node] = std::move(it);
    }
    ClippedFace cf;
    cf.face_index = int(fi);
    cf.x_ref = w.ref;
    const double nz = p.faces()[fi].normal.z;
    cf.normal_sign = nz > 0 ? 1 : (nz < 0 ? -1 : 0);
    std::map<int, bool> seen;
    for (const auto& [start, item] : next) {
      if (seen[start]) continue;
      std::vector<ClippedEdge> loop;
      int node = start;
      while (!seen[node]) {
        seen[node] = true;
        auto it = next.find(node);
        if (it == next.end()) throw Error(ErrorCode::TangencyAmbiguous, "clipped face loop does not close");
        for (const auto& e : it->second.edges) loop.push_back(e);
        node = it->second.to;
      }
      if (node != start) throw Error(ErrorCode::TangencyAmbiguous, "clipped face loop does not close");
      if (!loop.empty()) cf.loops.push_back(std::move(loop));
    }
    out.push_back(std::move(cf));
  }
  return out;
}

Moments clip_moments_upper(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg, ClipStats* stats,
                           bool zeroth_only) {
  ClipStats st;
  const Moments m = upper(p, c, cfg, st, zeroth_only);
  if (stats) *stats = st;
  return m;
}

Moments clip_moments(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg, ClipStats* stats,
                     bool zeroth_only) {
  ClipStats st;
  Moments total;
  if (!p.empty()) {
    Vec3 lo, hi;
    p.bounds(lo, hi);
    if (lo.z >= 0) {
      total = upper(p, c, cfg, st, zeroth_only);
    } else {
      const Polyhedron top = hi.z > 0 ? clip_by_halfspace(p, {{0, 0, -1}, 0}) : Polyhedron{};
      Polyhedron bottom = clip_by_halfspace(p, {{0, 0, 1}, 0});
      // half turn about e_x: exact sign flips
      std::vector<Vec3> v = bottom.vertices();
      for (auto& x : v) x = {x.x, -x.y, -x.z};
      bottom = with_vertices(bottom, std::move(v));
      total = upper(top, c, cfg, st, zeroth_only);
      Moments mb = upper(bottom, c, cfg, st, zeroth_only);
      mb.m1.y = -mb.m1.y;
      mb.m1.z = -mb.m1.z;
      total += mb;
    }
  }
  if (stats) *stats = st;
  return total;
}

}  // namespace quadclip
