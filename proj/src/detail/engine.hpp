#pragma once
// Templated clipping engine shared by the quadric and moments modules.
// T is double or quad; the B3 weight functions are always evaluated in double.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "quadclip/detail/kernels.hpp"
#include "quadclip/moments.hpp"

namespace quadclip::detail {

template <class T> struct Cyl {
  T alpha, beta, a2;
  explicit Cyl(const Cylinder& c) : alpha(T(c.alpha)), beta(T(c.beta)), a2(T(c.alpha) * T(c.alpha)) {}
  T phi(const Vec3T<T>& p) const { return beta * p.y * p.y + p.z * p.z - a2; }
  Vec3T<T> grad(const Vec3T<T>& p) const { return {T(0), T(2) * beta * p.y, T(2) * p.z}; }
};

enum class Fault { None, NearVertex, Tangent, Ambiguous, Degenerate };

struct FaultInfo {
  Fault fault = Fault::None;
  std::vector<int> vertices;  // what to nudge
  bool ok() const { return fault == Fault::None; }
};

struct Tol {
  double eps_corner;   // relative to alpha^2
  double eps_tangent;  // angular
};

template <class T> struct Roots {
  int n = 0;
  T t[2]{};
  bool tangent = false;
};

/* Roots of phi(p + t (q - p)), unfiltered, ascending. */
template <class T> Roots<T> edge_roots(const Cyl<T>& c, const Vec3T<T>& p, const Vec3T<T>& q, T eps_tangent) {
  const Vec3T<T> d = q - p;
  const T a = c.beta * d.y * d.y + d.z * d.z;
  const T b = T(2) * (c.beta * p.y * d.y + p.z * d.z);
  const T cc = c.phi(p);
  const T disc = b * b - T(4) * a * cc;
  Roots<T> r;
  if (a != T(0)) {
    const T tv = -b / (T(2) * a);
    if (tv >= T(0) && tv <= T(1)) {
      const T g = norm(c.grad(p + d * tv)) * norm(d);
      if (sqrt_(abs_(disc)) < eps_tangent * g) {
        r.tangent = true;
        return r;
      }
    }
  }
  if (disc < T(0)) return r;
  const T sq = sqrt_(disc);
  const T qq = b >= T(0) ? -(b + sq) / T(2) : -(b - sq) / T(2);
  if (qq == T(0)) {
    if (a != T(0) && cc == T(0)) { r.n = 1; r.t[0] = T(0); }
    return r;
  }
  r.t[r.n++] = cc / qq;
  if (a != T(0)) r.t[r.n++] = qq / a;
  if (r.n == 2 && r.t[1] < r.t[0]) std::swap(r.t[0], r.t[1]);
  return r;
}

template <class T> struct ArcT {
  Vec3T<T> p0, p1, xs;
  T w;
  bool straight;
};

template <class T> inline bool between(T v, T a, T b) { return a < b ? (a < v && v < b) : (b < v && v < a); }

/* Rational arc(s) from p0 to p1 on the conic of the plane (n, off). */
template <class T>
Fault build_arc_t(const Cyl<T>& c, const Vec3T<T>& n, T off, bool conic, const Vec3T<T>& p0, const Vec3T<T>& p1,
                  std::vector<ArcT<T>>& out, int depth = 0) {
  if (!conic) {
    out.push_back({p0, p1, (p0 + p1) * T(0.5), T(1), true});
    return Fault::None;
  }
  const Vec3T<T> ch = p1 - p0;
  Vec3T<T> t0 = cross(n, c.grad(p0)), t1 = cross(n, c.grad(p1));
  const T l0 = norm(t0), l1 = norm(t1);
  if (!(l0 > T(0)) || !(l1 > T(0))) return Fault::Degenerate;
  t0 = t0 / l0;
  t1 = t1 / l1;
  const T cs = dot(t0, t1);
  const T sn = norm(cross(t0, t1));
  bool split = false;
  if (sn < T(1e-10)) {
    if (cs > T(0)) {
      out.push_back({p0, p1, (p0 + p1) * T(0.5), T(1), true});
      return Fault::None;
    }
    split = true;
  }
  ArcT<T> arc{p0, p1, {}, T(1), false};
  if (!split) {
    // tangent lines met in a chord frame; the normal-equation form cancels badly once the
    // tangents are close to parallel
    const T L = norm(ch);
    const Vec3T<T> e1 = ch / L, e2 = cross(n, e1);
    const T c0 = dot(t0, e1), s0 = dot(t0, e2), c1 = dot(t1, e1), s1 = dot(t1, e2);
    const T den = c0 * s1 - c1 * s0;
    const T la = L * s1 / den;
    const T lb = L * s0 / den;
    if (!(la > T(0) && lb < T(0))) {
      split = true;
    } else {
      arc.xs = p0 + t0 * la;
      const Vec3T<T> m = (p0 + p1) * T(0.5);
      const Vec3T<T> dv = arc.xs - m;
      const T A = c.beta * dv.y * dv.y + dv.z * dv.z;
      const T B = T(2) * (c.beta * m.y * dv.y + m.z * dv.z);
      const T C = c.phi(m);
      const T disc = B * B - T(4) * A * C;
      T lam = T(-1);
      if (disc >= T(0)) {
        const T sq = sqrt_(disc);
        const T q = B >= T(0) ? -(B + sq) / T(2) : -(B - sq) / T(2);
        if (q != T(0)) {
          const T r1 = C / q;
          if (r1 > T(0) && r1 < T(1)) lam = r1;
          if (A != T(0)) {
            const T r2 = q / A;
            if (r2 > T(0) && r2 < T(1) && (lam < T(0) || abs_(r2 - T(0.5)) < abs_(lam - T(0.5)))) lam = r2;
          }
        }
      }
      if (lam <= T(0)) {
        split = true;
      } else {
        arc.w = lam / (T(1) - lam);
        if (!(arc.w > T(1e-3) && arc.w < T(1e3))) split = true;
      }
    }
  }
  if (!split) {
    out.push_back(arc);
    return Fault::None;
  }
  if (depth >= 8) return Fault::Degenerate;
  // the point where the tangent is parallel to the chord
  const T den = c.beta * (ch.z * ch.z + c.beta * ch.y * ch.y);
  if (!(den > T(0)) || n.x == T(0)) return Fault::Degenerate;
  const T s = c.alpha / sqrt_(den);
  Vec3T<T> q{T(0), s * ch.z, -s * c.beta * ch.y};
  if (q.z < T(0)) q = Vec3T<T>{T(0), -q.y, -q.z};
  q.x = (off - n.y * q.y - n.z * q.z) / n.x;
  if (!between(q.y, p0.y, p1.y)) return Fault::Degenerate;
  const Fault f = build_arc_t(c, n, off, conic, p0, q, out, depth + 1);
  if (f != Fault::None) return f;
  return build_arc_t(c, n, off, conic, q, p1, out, depth + 1);
}

/* Node ids: vertices are >= 0, crossings are -1 - (2 * cache entry + root). */
template <class T> struct Seg {
  Vec3T<T> a, b;
  int na, nb;
};

template <class T> struct Crossing {
  Vec3T<T> p;
  bool exit;
  int node;
  int group;
  T key;
};

template <class T> struct FaceWork {
  Vec3T<T> n{};
  T off{};
  bool conic = true;
  Vec3T<T> ref{};
  bool has_ref = false;
  std::vector<Seg<T>> segs;
  std::vector<Crossing<T>> cr;
  std::vector<std::pair<int, int>> pairs;       // exit -> entry, indices into cr
  std::vector<std::vector<ArcT<T>>> arcs;         // one list per pair
  void clear() {
    has_ref = false;
    segs.clear();
    cr.clear();
    pairs.clear();
    arcs.clear();
  }
};

template <class T> class UpperEngine {
 public:
  UpperEngine(const std::vector<Vec3T<T>>& v, const std::vector<Face>& faces, const Cylinder& c, Tol tol)
      : v_(v), faces_(faces), c_(c), eps_corner_(T(tol.eps_corner) * c_.a2), eps_tangent_(T(tol.eps_tangent)) {}

  /* Classifies vertices; NearVertex lists every vertex within eps_corner of S. */
  FaultInfo classify() {
    FaultInfo info;
    phi_.resize(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      phi_[i] = c_.phi(v_[i]);
      if (abs_(phi_[i]) < eps_corner_) info.vertices.push_back(int(i));
    }
    if (!info.vertices.empty()) info.fault = Fault::NearVertex;
    return info;
  }

  FaultInfo face(int fi, FaceWork<T>& w);

  FaultInfo run(bool zeroth, Vec4T<T>& acc, std::vector<FaceWork<T>>* keep = nullptr) {
    acc = Vec4T<T>{T(0), T(0), T(0), T(0)};
    FaultInfo info = classify();
    if (!info.ok()) return info;
    FaceWork<T> w;
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
      info = face(int(fi), w);
      if (!info.ok()) return info;
      accumulate(w, zeroth, acc);
      if (keep) keep->push_back(w);
    }
    return info;
  }

  static void accumulate(const FaceWork<T>& w, bool zeroth, Vec4T<T>& acc);

 private:
  struct Entry {
    int n = 0;
    T t[2]{};
    bool exit[2]{};
    Vec3T<T> p[2];
  };

  const std::vector<Vec3T<T>>& v_;
  const std::vector<Face>& faces_;
  Cyl<T> c_;
  T eps_corner_, eps_tangent_;
  std::vector<T> phi_;
  std::unordered_map<uint64_t, int> edge_index_;
  std::vector<Entry> entries_;

  FaultInfo edge(int a, int b, int& entry);
};

template <class T> FaultInfo UpperEngine<T>::edge(int a, int b, int& entry) {
  FaultInfo info;
  const int lo = std::min(a, b), hi = std::max(a, b);
  const uint64_t key = uint64_t(lo) * v_.size() + uint64_t(hi);
  auto it = edge_index_.find(key);
  if (it != edge_index_.end()) {
    entry = it->second;
    return info;
  }
  Entry e;
  const bool in_lo = phi_[lo] < T(0), in_hi = phi_[hi] < T(0);
  const Roots<T> r = edge_roots(c_, v_[lo], v_[hi], eps_tangent_);
  if (r.tangent) {
    info.fault = Fault::Tangent;
    info.vertices = {lo, hi};
    return info;
  }
  if (in_lo != in_hi) {
    int pick = -1;
    for (int k = 0; k < r.n; ++k)
      if (r.t[k] >= T(0) && r.t[k] <= T(1)) {
        if (pick >= 0) {
          info.fault = Fault::Ambiguous;
          info.vertices = {lo, hi};
          return info;
        }
        pick = k;
      }
    T t;
    if (pick >= 0) {
      t = r.t[pick];
    } else if (r.n > 0) {
      // rounding pushed the single root just outside the edge
      t = r.t[0];
      for (int k = 1; k < r.n; ++k)
        if (abs_(r.t[k] - T(0.5)) < abs_(t - T(0.5))) t = r.t[k];
      t = std::min(T(1), std::max(T(0), t));
    } else {
      info.fault = Fault::Ambiguous;
      info.vertices = {lo, hi};
      return info;
    }
    e.n = 1;
    e.t[0] = t;
    e.exit[0] = in_lo;
  } else if (r.n == 2) {
    const bool i0 = r.t[0] > T(0) && r.t[0] < T(1), i1 = r.t[1] > T(0) && r.t[1] < T(1);
    if (i0 && i1 && r.t[0] < r.t[1]) {
      e.n = 2;
      e.t[0] = r.t[0];
      e.t[1] = r.t[1];
      e.exit[0] = in_lo;
      e.exit[1] = !in_lo;
    } else if (i0 || i1) {
      info.fault = Fault::Ambiguous;
      info.vertices = {lo, hi};
      return info;
    }
  }
  const Vec3T<T> d = v_[hi] - v_[lo];
  for (int k = 0; k < e.n; ++k) e.p[k] = v_[lo] + d * e.t[k];
  entry = int(entries_.size());
  entries_.push_back(e);
  edge_index_.emplace(key, entry);
  return info;
}

template <class T> FaultInfo UpperEngine<T>::face(int fi, FaceWork<T>& w) {
  w.clear();
  FaultInfo info;
  const Face& f = faces_[fi];
  bool flat = true;
  for (const auto& loop : f.loops)
    for (int i : loop)
      if (v_[i].z != T(0)) flat = false;
  if (flat) return info;  // every kernel carries a factor z

  for (const auto& loop : f.loops) {
    const std::size_t m = loop.size();
    for (std::size_t k = 0; k < m; ++k) {
      const int a = loop[k], b = loop[(k + 1) % m];
      int ei;
      info = edge(a, b, ei);
      if (!info.ok()) return info;
      const Entry& e = entries_[ei];
      const bool fwd = a < b;
      Vec3T<T> start = v_[a];
      int start_node = a;
      bool inside = phi_[a] < T(0);
      if (inside && !w.has_ref) {
        w.ref = v_[a];
        w.has_ref = true;
      }
      for (int j = 0; j < e.n; ++j) {
        const int r = fwd ? j : e.n - 1 - j;
        const bool ex = fwd ? e.exit[r] : !e.exit[r];
        const int node = -1 - (2 * ei + r);
        if (ex) {
          w.segs.push_back({start, e.p[r], start_node, node});
          inside = false;
        } else {
          start = e.p[r];
          start_node = node;
          inside = true;
        }
        w.cr.push_back({e.p[r], ex, node, 0, T(0)});
      }
      if (inside) w.segs.push_back({start, v_[b], start_node, b});
    }
  }
  if (w.segs.empty() && w.cr.empty()) return info;
  if (!w.has_ref) {
    w.ref = w.cr.empty() ? w.segs[0].a : w.cr[0].p;
    w.has_ref = true;
  }
  if (w.cr.empty()) return info;

  // plane in working precision
  Vec3T<T> n{}, cen{};
  int cnt = 0;
  for (const auto& loop : f.loops) {
    const std::size_t m = loop.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec3T<T>& a = v_[loop[k]];
      const Vec3T<T>& b = v_[loop[(k + 1) % m]];
      n.x += (a.y - b.y) * (a.z + b.z);
      n.y += (a.z - b.z) * (a.x + b.x);
      n.z += (a.x - b.x) * (a.y + b.y);
      cen += a;
      ++cnt;
    }
  }
  const T nl = norm(n);
  auto face_fault = [&](Fault kind) {
    FaultInfo fi2;
    fi2.fault = kind;
    for (const auto& loop : f.loops) fi2.vertices.insert(fi2.vertices.end(), loop.begin(), loop.end());
    return fi2;
  };
  if (!(nl > T(0))) return face_fault(Fault::Degenerate);
  w.n = n / nl;
  w.off = dot(w.n, cen / T(cnt));
  w.conic = abs_(w.n.x) > T(1e-12);

  for (auto& x : w.cr) {
    if (w.conic) {
      // on the ellipse y is flat in z near z = 0; the angle is not
      const T y = c_.beta > T(0) ? -atan2_(std::max(x.p.z, T(0)), sqrt_(c_.beta) * x.p.y) : x.p.y;
      x.key = w.n.x > T(0) ? -y : y;
    } else {
      const Vec3T<T> t = cross(w.n, c_.grad(x.p));
      if (abs_(t.x) < eps_tangent_ * norm(c_.grad(x.p))) return face_fault(Fault::Degenerate);
      x.group = t.x > T(0) ? 1 : 0;
      x.key = t.x > T(0) ? x.p.x : -x.p.x;
    }
  }
  std::vector<int> order(w.cr.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w.cr[a].group != w.cr[b].group) return w.cr[a].group < w.cr[b].group;
    return w.cr[a].key < w.cr[b].key;
  });
  // a lone exit/entry pair has only one pairing, whatever the ruling groups say; near-tangent
  // faces with a double-rounded tilt land here
  if (!w.conic && w.cr.size() == 2 && w.cr[0].exit != w.cr[1].exit && w.cr[0].group != w.cr[1].group) {
    w.cr[0].group = w.cr[1].group = 0;
    order = w.cr[0].exit ? std::vector<int>{0, 1} : std::vector<int>{1, 0};
  }
  for (std::size_t k = 0; k < order.size(); k += 2) {
    if (k + 1 >= order.size()) return face_fault(Fault::Ambiguous);
    const auto& e = w.cr[order[k]];
    const auto& g = w.cr[order[k + 1]];
    if (!e.exit || g.exit || e.group != g.group) return face_fault(Fault::Ambiguous);
    w.pairs.push_back({order[k], order[k + 1]});
  }
  for (const auto& [ie, ig] : w.pairs) {
    w.arcs.emplace_back();
    const Vec3T<T>& p0 = w.cr[ie].p;
    const Vec3T<T>& p1 = w.cr[ig].p;
    if (p0 == p1) continue;
    const Fault fl = build_arc_t(c_, w.n, w.off, w.conic, p0, p1, w.arcs.back());
    if (fl != Fault::None) return face_fault(fl);
  }
  return info;
}

template <class T> inline void add_m1(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& ref, bool zeroth, Vec4T<T>& acc) {
  const T area = op_A(a, b, ref);
  if (area == T(0)) return;
  const auto k = op_B1(a, b, ref, !zeroth);
  for (int i = 0; i < 4; ++i) acc[i] += area * k[i];
}

template <class T> void UpperEngine<T>::accumulate(const FaceWork<T>& w, bool zeroth, Vec4T<T>& acc) {
  for (const auto& s : w.segs) add_m1(s.a, s.b, w.ref, zeroth, acc);
  for (const auto& list : w.arcs)
    for (const auto& a : list) {
      add_m1(a.p0, a.p1, w.ref, zeroth, acc);
      const T dy = a.p0.y - a.p1.y;
      if (dy != T(0)) {
        const auto k2 = op_B2(a.p0, a.p1, !zeroth);
        for (int i = 0; i < 4; ++i) acc[i] += dy * k2[i];
      }
      if (a.straight) continue;
      const T ad = op_A_dagger(a.p0, a.p1, a.xs);
      if (ad == T(0)) continue;
      const auto g = B3Evaluator::instance().weights(double(a.w));
      const Vec3T<T>& xa = a.p0;
      const Vec3T<T>& xb = a.p1;
      const Vec3T<T>& xc = a.xs;
      const T sx = xa.x + xb.x;
      acc[0] -= ad * (sx * T(g[0]) + xc.x * T(g[1]));
      if (zeroth) continue;
      const T sy = xa.y + xb.y, sz = xa.z + xb.z;
      acc[1] -= ad * (sx * sx * T(g[2]) + (xa.x * xa.x + xb.x * xb.x) * T(g[3]) + sx * xc.x * T(g[4]) + xc.x * xc.x * T(g[5]));
      acc[2] -= ad * (T(2) * sx * sy * T(g[2]) + T(2) * (xa.x * xa.y + xb.x * xb.y) * T(g[3]) +
                      (sx * xc.y + sy * xc.x) * T(g[4]) + T(2) * xc.x * xc.y * T(g[5]));
      acc[3] -= ad * (T(2) * sx * sz * T(g[2]) + T(2) * (xa.x * xa.z + xb.x * xb.z) * T(g[3]) +
                      (sx * xc.z + sz * xc.x) * T(g[4]) + T(2) * xc.x * xc.z * T(g[5]));
    }
}

/* Deterministic unit direction for (vertex, attempt). */
inline Vec3 nudge_direction(int vertex, int attempt) {
  uint64_t s = uint64_t(vertex) * 0x9E3779B97F4A7C15ull ^ (uint64_t(attempt) + 1) * 0xD1B54A32D192ED03ull;
  auto next = [&]() {
    uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53 * 2 - 1;
  };
  for (;;) {
    const Vec3 d{next(), next(), next()};
    const double l = norm(d);
    if (l > 0.1 && l <= 1) return d / l;
  }
}

template <class T>
void nudge_vertices(std::vector<Vec3T<T>>& v, std::vector<int> ids, int attempt, T dist, bool keep_upper) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int i : ids) {
    const Vec3 d = nudge_direction(i, attempt);
    Vec3T<T> dt{T(d.x) * dist, T(d.y) * dist, T(d.z) * dist};
    if (keep_upper && v[i].z + dt.z < T(0)) dt.z = -dt.z;
    v[i] += dt;
  }
}

}  // namespace quadclip::detail
