#include <algorithm>
#include <cmath>

#include "quadclip/polytope.hpp"

namespace quadclip {

namespace {

/* Faces of a convex polytope given one outward direction per face. */
std::vector<std::vector<int>> hull_faces(const std::vector<Vec3>& v, const std::vector<Vec3>& normals) {
  std::vector<std::vector<int>> faces;
  for (const Vec3& n0 : normals) {
    const Vec3 n = normalized(n0);
    double dmax = -1e300;
    for (const auto& p : v) dmax = std::max(dmax, dot(p, n));
    std::vector<int> idx;
    Vec3 c{};
    for (std::size_t i = 0; i < v.size(); ++i)
      if (dot(v[i], n) > dmax - 1e-9) {
        idx.push_back(int(i));
        c += v[i];
      }
    c = c / double(idx.size());
    const Vec3 e1 = normalized(v[idx[0]] - c);
    const Vec3 e2 = cross(n, e1);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      const Vec3 da = v[a] - c, db = v[b] - c;
      return std::atan2(dot(da, e2), dot(da, e1)) < std::atan2(dot(db, e2), dot(db, e1));
    });
    faces.push_back(std::move(idx));
  }
  return faces;
}

std::vector<Vec3> scaled(std::vector<Vec3> v, double s) {
  for (auto& p : v) p = p * s;
  return v;
}

Polyhedron tetrahedron() {
  std::vector<Vec3> v{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<Vec3> n;
  for (const auto& p : v) n.push_back(-p);
  auto f = hull_faces(v, n);
  return build_polyhedron(scaled(v, 1 / (2 * std::sqrt(2.0))), f);
}

Polyhedron cube() {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.push_back({(i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5});
  std::vector<Vec3> n{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  return build_polyhedron(v, hull_faces(v, n));
}

Polyhedron dodecahedron() {
  const double phi = (1 + std::sqrt(5.0)) / 2, ip = 1 / phi;
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.push_back({(i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0});
  for (int i = 0; i < 4; ++i) {
    const double a = (i & 1) ? ip : -ip, b = (i & 2) ? phi : -phi;
    v.push_back({0, a, b});
    v.push_back({a, b, 0});
    v.push_back({b, 0, a});
  }
  // face normals point at the vertices of the dual icosahedron
  std::vector<Vec3> n;
  for (int i = 0; i < 4; ++i) {
    const double a = (i & 1) ? phi : -phi, b = (i & 2) ? 1.0 : -1.0;
    n.push_back({0, a, b});
    n.push_back({a, b, 0});
    n.push_back({b, 0, a});
  }
  auto f = hull_faces(v, n);
  return build_polyhedron(scaled(v, phi / 2), f);  // edge 2/phi -> 1
}

/* Outer side 1, square hole of side 1/2 along z. Every face is a quad on the
   4x4 grid {-1/2,-1/4,1/4,1/2}^2 extruded over z in [-1/2, 1/2]. */
Polyhedron hollow_cube() {
  const double X[4] = {-0.5, -0.25, 0.25, 0.5};
  std::vector<Vec3> v;
  auto id = [](int i, int j, int k) { return k * 16 + j * 4 + i; };
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) v.push_back({X[i], X[j], k ? 0.5 : -0.5});
  std::vector<std::vector<int>> f;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      if (i == 1 && j == 1) continue;
      f.push_back({id(i, j, 1), id(i + 1, j, 1), id(i + 1, j + 1, 1), id(i, j + 1, 1)});
      f.push_back({id(i, j, 0), id(i, j + 1, 0), id(i + 1, j + 1, 0), id(i + 1, j, 0)});
    }
  // walls: boundary segments a -> b in the orientation of the annulus boundary
  auto wall = [&](int ia, int ja, int ib, int jb) {
    f.push_back({id(ia, ja, 0), id(ib, jb, 0), id(ib, jb, 1), id(ia, ja, 1)});
  };
  for (int i = 0; i < 3; ++i) {
    wall(i, 0, i + 1, 0);
    wall(3, i, 3, i + 1);
    wall(3 - i, 3, 2 - i, 3);
    wall(0, 3 - i, 0, 2 - i);
  }
  wall(1, 1, 1, 2);
  wall(1, 2, 2, 2);
  wall(2, 2, 2, 1);
  wall(2, 1, 1, 1);
  return build_polyhedron(v, f);
}

}  // namespace

ShapeKind parse_shape(const std::string& s) {
  if (s == "tetra" || s == "tetrahedron") return ShapeKind::Tetrahedron;
  if (s == "cube") return ShapeKind::Cube;
  if (s == "dodeca" || s == "dodecahedron") return ShapeKind::Dodecahedron;
  if (s == "hollow" || s == "hollow_cube") return ShapeKind::HollowCube;
  throw Error(ErrorCode::BadConfig, "unknown geometry '" + s + "'");
}

const char* shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::Tetrahedron: return "tetra";
    case ShapeKind::Cube: return "cube";
    case ShapeKind::Dodecahedron: return "dodeca";
    case ShapeKind::HollowCube: return "hollow";
  }
  return "?";
}

Polyhedron make_shape(ShapeKind kind, bool unit_volume) {
  Polyhedron p;
  switch (kind) {
    case ShapeKind::Tetrahedron: p = tetrahedron(); break;
    case ShapeKind::Cube: p = cube(); break;
    case ShapeKind::Dodecahedron: p = dodecahedron(); break;
    case ShapeKind::HollowCube: p = hollow_cube(); break;
  }
  if (!unit_volume || kind == ShapeKind::Cube) return p;
  const double s = std::cbrt(1 / polyhedron_moments(p).m0);
  return with_vertices(p, scaled(p.vertices(), s));
}

}  // namespace quadclip
