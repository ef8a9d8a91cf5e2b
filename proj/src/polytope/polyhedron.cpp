#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "quadclip/detail/kernels.hpp"
#include "quadclip/polytope.hpp"

namespace quadclip {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPlanarFace: return "NonPlanarFace";
    case ErrorCode::NotWatertight: return "NotWatertight";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::InvertedOrientation: return "InvertedOrientation";
    case ErrorCode::InvalidCylinder: return "InvalidCylinder";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::TangencyAmbiguous: return "TangencyAmbiguous";
    case ErrorCode::DegenerateConic: return "DegenerateConic";
    case ErrorCode::NudgeExhausted: return "NudgeExhausted";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SingularWeight: return "SingularWeight";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

/* ---- RigidTransform ---- */

Vec3 RigidTransform::rotate(const Vec3& p) const {
  const auto& r = rotation;
  return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
          r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
          r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z};
}

Vec3 RigidTransform::apply(const Vec3& p) const { return rotate(p) + translation; }

RigidTransform RigidTransform::translate(const Vec3& t) {
  RigidTransform r;
  r.translation = t;
  return r;
}

namespace {

void cos_sin(double a, double& c, double& s) {
  c = std::cos(a);
  s = std::sin(a);
  // exact quarter turns, so axis-aligned faces stay axis-aligned
  if (std::fabs(c) < 1e-15) c = 0;
  if (std::fabs(s) < 1e-15) s = 0;
  if (c == 0) s = s > 0 ? 1 : -1;
  if (s == 0) c = c > 0 ? 1 : -1;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return r;
}

}  // namespace

RigidTransform RigidTransform::from_angles(double tx, double ty, double tz, const Vec3& t) {
  double cx, sx, cy, sy, cz, sz;
  cos_sin(tx, cx, sx);
  cos_sin(ty, cy, sy);
  cos_sin(tz, cz, sz);
  Mat3 rx{{{1, 0, 0}, {0, cx, -sx}, {0, sx, cx}}};
  Mat3 ry{{{cy, 0, sy}, {0, 1, 0}, {-sy, 0, cy}}};
  Mat3 rz{{{cz, -sz, 0}, {sz, cz, 0}, {0, 0, 1}}};
  RigidTransform r;
  r.rotation = matmul(rz, matmul(ry, rx));
  r.translation = t;
  return r;
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
  RigidTransform r;
  r.rotation = matmul(rotation, inner.rotation);
  r.translation = rotate(inner.translation) + translation;
  return r;
}

/* ---- Polyhedron ---- */

namespace {

void face_plane(const std::vector<Vec3>& v, Face& f) {
  Vec3 n{};
  Vec3 c{};
  int cnt = 0;
  for (const auto& loop : f.loops) {
    const std::size_t m = loop.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec3& a = v[loop[k]];
      const Vec3& b = v[loop[(k + 1) % m]];
      n.x += (a.y - b.y) * (a.z + b.z);
      n.y += (a.z - b.z) * (a.x + b.x);
      n.z += (a.x - b.x) * (a.y + b.y);
      c += a;
      ++cnt;
    }
  }
  const double len = norm(n);
  f.normal = len > 0 ? n / len : Vec3{};
  f.offset = cnt ? dot(f.normal, c / double(cnt)) : 0;
}

}  // namespace

std::size_t Polyhedron::loop_count() const {
  std::size_t n = 0;
  for (const auto& f : faces_) n += f.loops.size();
  return n;
}

void Polyhedron::bounds(Vec3& lo, Vec3& hi) const {
  const double inf = std::numeric_limits<double>::infinity();
  lo = {inf, inf, inf};
  hi = {-inf, -inf, -inf};
  for (const auto& p : vertices_)
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
}

double Polyhedron::diameter() const {
  if (vertices_.empty()) return 0;
  Vec3 lo, hi;
  bounds(lo, hi);
  return norm(hi - lo);
}

Polyhedron Polyhedron::from_trusted(std::vector<Vec3> vertices, std::vector<Face> faces) {
  Polyhedron p;
  p.vertices_ = std::move(vertices);
  p.faces_ = std::move(faces);
  for (auto& f : p.faces_) face_plane(p.vertices_, f);
  return p;
}

bool is_watertight(const Polyhedron& p) {
  std::unordered_map<uint64_t, int> count;
  const uint64_t nv = p.vertices().size();
  for (const auto& f : p.faces())
    for (const auto& loop : f.loops)
      for (std::size_t k = 0; k < loop.size(); ++k) {
        const uint64_t a = loop[k], b = loop[(k + 1) % loop.size()];
        if (++count[a * nv + b] > 1) return false;
      }
  for (const auto& [key, c] : count) {
    const uint64_t a = key / nv, b = key % nv;
    auto it = count.find(b * nv + a);
    if (it == count.end() || it->second != 1) return false;
  }
  return true;
}

void validate(const Polyhedron& p) {
  const auto& v = p.vertices();
  const double tol = 1e-12 * std::max(p.diameter(), 1e-300);
  for (std::size_t fi = 0; fi < p.faces().size(); ++fi) {
    const Face& f = p.faces()[fi];
    if (f.loops.empty()) throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(fi) + " has no loops");
    for (const auto& loop : f.loops) {
      if (loop.size() < 3) throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(fi) + " has fewer than 3 vertices");
      for (int i : loop)
        if (i < 0 || std::size_t(i) >= v.size())
          throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(fi) + " index out of range");
      for (std::size_t k = 0; k < loop.size(); ++k)
        if (loop[k] == loop[(k + 1) % loop.size()])
          throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(fi) + " repeats a vertex");
    }
    if (norm2(f.normal) == 0) throw Error(ErrorCode::DegenerateFace, "face " + std::to_string(fi) + " has zero area");
    for (const auto& loop : f.loops)
      for (int i : loop)
        if (std::fabs(dot(f.normal, v[i]) - f.offset) > tol)
          throw Error(ErrorCode::NonPlanarFace, "face " + std::to_string(fi) + " is not planar");
  }
  if (!is_watertight(p)) throw Error(ErrorCode::NotWatertight, "directed edges do not pair up");
  if (polyhedron_moments(p).m0 < 0) throw Error(ErrorCode::InvertedOrientation, "negative signed volume");
}

Polyhedron build_polyhedron(const std::vector<Vec3>& vertices, const std::vector<std::vector<int>>& faces) {
  std::vector<Face> fs;
  fs.reserve(faces.size());
  for (const auto& loop : faces) {
    for (int i : loop)
      if (i < 0 || std::size_t(i) >= vertices.size()) throw Error(ErrorCode::DegenerateFace, "vertex index out of range");
    Face f;
    f.loops.push_back(loop);
    fs.push_back(std::move(f));
  }
  Polyhedron p = Polyhedron::from_trusted(vertices, std::move(fs));
  validate(p);
  return p;
}

Moments polyhedron_moments(const Polyhedron& p) {
  const auto& v = p.vertices();
  detail::Vec4T<double> acc{0, 0, 0, 0};
  for (const auto& f : p.faces()) {
    const Vec3& ref = v[f.loops[0][0]];
    for (const auto& loop : f.loops) {
      const std::size_t m = loop.size();
      for (std::size_t k = 0; k < m; ++k) {
        const Vec3& a = v[loop[k]];
        const Vec3& b = v[loop[(k + 1) % m]];
        const double area = detail::op_A(a, b, ref);
        if (area == 0) continue;
        const auto b1 = detail::op_B1(a, b, ref);
        for (int i = 0; i < 4; ++i) acc[i] += area * b1[i];
      }
    }
  }
  return {acc[0], {acc[1], acc[2], acc[3]}};
}

Polyhedron with_vertices(const Polyhedron& p, std::vector<Vec3> vertices) {
  return Polyhedron::from_trusted(std::move(vertices), p.faces());
}

Polyhedron transform(const Polyhedron& p, const RigidTransform& t) {
  std::vector<Vec3> v;
  v.reserve(p.vertices().size());
  for (const auto& x : p.vertices()) v.push_back(t.apply(x));
  return with_vertices(p, std::move(v));
}

Polyhedron mirror(const Polyhedron& p, int axis) {
  std::vector<Vec3> v = p.vertices();
  for (auto& x : v) x[axis] = -x[axis];
  std::vector<Face> fs = p.faces();
  for (auto& f : fs)
    for (auto& loop : f.loops) std::reverse(loop.begin(), loop.end());
  return Polyhedron::from_trusted(std::move(v), std::move(fs));
}

Moments transform_moments(const Moments& m, const RigidTransform& t) {
  return {m.m0, t.rotate(m.m1) + t.translation * m.m0};
}

}  // namespace quadclip
