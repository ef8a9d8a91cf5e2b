#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "quadclip/polytope.hpp"

namespace quadclip {

namespace {

struct Cross {
  int node;
  bool exit;
  int piece;
  double s;
  double tau;
};

struct Piece {
  std::vector<int> nodes;  // entry node, kept vertices..., exit node
  int entry = -1, exit = -1;
};

class Clipper {
 public:
  Clipper(const Polyhedron& p, const Plane& pl) : p_(p), pl_(pl), V_(p.vertices()) {}

  Polyhedron run();

 private:
  const Polyhedron& p_;
  Plane pl_;
  const std::vector<Vec3>& V_;
  std::vector<double> d_;
  std::vector<Vec3> snapped_;
  std::vector<int> vmap_;
  std::unordered_map<uint64_t, int> emap_;
  std::vector<Vec3> out_v_;
  std::vector<std::pair<int, int>> cap_edges_;

  bool kept(int i) const { return d_[i] < 0; }
  int vertex_node(int i);
  int edge_node(int a, int b);
  void clip_face(const Face& f, std::vector<Face>& out);
  void build_cap(std::vector<Face>& out);
};

int Clipper::vertex_node(int i) {
  if (vmap_[i] < 0) {
    vmap_[i] = int(out_v_.size());
    out_v_.push_back(snapped_[i]);
  }
  return vmap_[i];
}

int Clipper::edge_node(int a, int b) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  const uint64_t key = uint64_t(lo) * V_.size() + uint64_t(hi);
  auto it = emap_.find(key);
  if (it != emap_.end()) return it->second;
  const double t = d_[lo] / (d_[lo] - d_[hi]);
  Vec3 x = V_[lo] + (V_[hi] - V_[lo]) * t;
  x -= pl_.normal * pl_.signed_distance(x);
  const int id = int(out_v_.size());
  out_v_.push_back(x);
  emap_.emplace(key, id);
  return id;
}

void Clipper::clip_face(const Face& f, std::vector<Face>& out) {
  std::vector<std::vector<int>> loops_out;
  std::vector<Piece> pieces;
  std::vector<Cross> cr;

  Vec3 u = cross(f.normal, pl_.normal);
  const double ul = norm(u);
  if (ul > 0) u = u / ul;

  for (const auto& loop : f.loops) {
    const int n = int(loop.size());
    int nk = 0, k0 = -1;
    for (int k = 0; k < n; ++k)
      if (kept(loop[k])) {
        ++nk;
        if (!kept(loop[(k + n - 1) % n])) k0 = k;
      }
    if (nk == 0) continue;
    if (nk == n) {
      std::vector<int> l;
      l.reserve(n);
      for (int i : loop) l.push_back(vertex_node(i));
      loops_out.push_back(std::move(l));
      continue;
    }
    Piece cur;
    for (int j = 0; j < n; ++j) {
      const int a = loop[(k0 - 1 + j + n) % n];
      const int b = loop[(k0 + j) % n];
      const bool ka = kept(a), kb = kept(b);
      if (ka && kb) {
        cur.nodes.push_back(vertex_node(b));
      } else if (ka && !kb) {
        const bool at_vertex = d_[b] == 0;
        const int node = at_vertex ? vertex_node(b) : edge_node(a, b);
        cur.nodes.push_back(node);
        cur.exit = int(cr.size());
        const Vec3& x = out_v_[node];
        const double tau = at_vertex ? dot(V_[a] - V_[b], u) / -d_[a] : 0.0;
        cr.push_back({node, true, int(pieces.size()), dot(x, u), tau});
        pieces.push_back(std::move(cur));
        cur = Piece{};
      } else if (!ka && kb) {
        const bool at_vertex = d_[a] == 0;
        const int node = at_vertex ? vertex_node(a) : edge_node(a, b);
        cur.nodes.push_back(node);
        cur.nodes.push_back(vertex_node(b));
        cur.entry = int(cr.size());
        const Vec3& x = out_v_[node];
        const double tau = at_vertex ? dot(V_[b] - V_[a], u) / -d_[b] : 0.0;
        cr.push_back({node, false, int(pieces.size()), dot(x, u), tau});
      }
    }
  }

  if (!pieces.empty()) {
    std::vector<int> order(cr.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (cr[a].s != cr[b].s) return cr[a].s < cr[b].s;
      return cr[a].tau < cr[b].tau;
    });
    // exit -> next entry along u; fall back to greedy matching if the order is off
    std::vector<int> partner(cr.size(), -1);
    bool alternating = true;
    for (std::size_t k = 0; k < order.size(); ++k)
      if (cr[order[k]].exit != (k % 2 == 0)) alternating = false;
    if (alternating) {
      for (std::size_t k = 0; k + 1 < order.size(); k += 2) partner[order[k]] = order[k + 1];
    } else {
      std::vector<char> used(cr.size(), 0);
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (!cr[order[k]].exit) continue;
        for (std::size_t j = 1; j <= order.size(); ++j) {
          const int c = order[(k + j) % order.size()];
          if (!cr[c].exit && !used[c]) {
            used[c] = 1;
            partner[order[k]] = c;
            break;
          }
        }
      }
    }
    std::vector<int> next_piece(pieces.size(), -1);
    for (std::size_t i = 0; i < cr.size(); ++i) {
      if (!cr[i].exit || partner[i] < 0) continue;
      const Cross& a = cr[i];
      const Cross& b = cr[partner[i]];
      next_piece[a.piece] = b.piece;
      if (a.node != b.node) cap_edges_.push_back({b.node, a.node});
    }
    std::vector<char> seen(pieces.size(), 0);
    for (std::size_t start = 0; start < pieces.size(); ++start) {
      if (seen[start]) continue;
      std::vector<int> l;
      int pc = int(start);
      while (pc >= 0 && !seen[pc]) {
        seen[pc] = 1;
        for (int node : pieces[pc].nodes)
          if (l.empty() || l.back() != node) l.push_back(node);
        pc = next_piece[pc];
      }
      while (l.size() > 1 && l.front() == l.back()) l.pop_back();
      if (l.size() >= 3) loops_out.push_back(std::move(l));
    }
  }
  if (!loops_out.empty()) {
    Face nf;
    nf.loops = std::move(loops_out);
    out.push_back(std::move(nf));
  }
}

void Clipper::build_cap(std::vector<Face>& out) {
  if (cap_edges_.empty()) return;
  // cancel opposite pairs
  std::unordered_map<uint64_t, int> cnt;
  const uint64_t N = out_v_.size();
  for (auto [a, b] : cap_edges_) cnt[uint64_t(a) * N + b]++;
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b] : cap_edges_) {
    auto& ab = cnt[uint64_t(a) * N + b];
    auto it = cnt.find(uint64_t(b) * N + a);
    if (it != cnt.end() && it->second > 0 && ab > 0) {
      --ab;
      --it->second;
      continue;
    }
    if (ab > 0) {
      --ab;
      edges.push_back({a, b});
    }
  }
  if (edges.empty()) return;
  std::unordered_map<int, std::vector<int>> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].first].push_back(int(i));
  std::vector<char> used(edges.size(), 0);
  Face cap;
  const Vec3 m = pl_.normal;
  for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
    if (used[e0]) continue;
    used[e0] = 1;
    std::vector<int> l{edges[e0].first};
    int prev = edges[e0].first, cur = edges[e0].second;
    const int start = prev;
    int guard = 0;
    while (cur != start && guard++ < int(edges.size()) + 1) {
      l.push_back(cur);
      const Vec3 din = out_v_[cur] - out_v_[prev];
      int best = -1;
      double best_ang = -1e300;
      for (int ei : outgoing[cur]) {
        if (used[ei]) continue;
        const Vec3 dout = out_v_[edges[ei].second] - out_v_[cur];
        const double ang = std::atan2(dot(m, cross(din, dout)), dot(din, dout));
        if (ang > best_ang) {
          best_ang = ang;
          best = ei;
        }
      }
      if (best < 0) break;
      used[best] = 1;
      prev = cur;
      cur = edges[best].second;
    }
    if (l.size() >= 3) cap.loops.push_back(std::move(l));
  }
  if (!cap.loops.empty()) out.push_back(std::move(cap));
}

Polyhedron Clipper::run() {
  const std::size_t nv = V_.size();
  const double tol = 1e-12 * p_.diameter();
  d_.resize(nv);
  snapped_ = V_;
  double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
  for (std::size_t i = 0; i < nv; ++i) {
    double di = pl_.signed_distance(V_[i]);
    if (std::fabs(di) < tol) {
      snapped_[i] = V_[i] - pl_.normal * di;
      di = 0;
    }
    d_[i] = di;
    dmin = std::min(dmin, di);
    dmax = std::max(dmax, di);
  }
  if (dmax <= 0) return p_;
  if (dmin >= 0) return {};
  vmap_.assign(nv, -1);
  std::vector<Face> faces;
  for (const auto& f : p_.faces()) clip_face(f, faces);
  build_cap(faces);
  if (faces.empty()) return {};
  return Polyhedron::from_trusted(std::move(out_v_), std::move(faces));
}

}  // namespace

Polyhedron clip_by_halfspace(const Polyhedron& p, const Plane& plane) {
  if (p.empty()) return {};
  Clipper c(p, plane);
  return c.run();
}

}  // namespace quadclip
