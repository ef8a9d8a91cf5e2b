#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "error.hpp"
#include "vec3.hpp"

namespace quadclip {

/* Volume and first moments: m0 = ∫1, m1 = (∫x, ∫y, ∫z). */
struct Moments {
  double m0 = 0;
  Vec3 m1{};

  Moments& operator+=(const Moments& o) { m0 += o.m0; m1 += o.m1; return *this; }
  Moments operator+(const Moments& o) const { Moments r = *this; r += o; return r; }
  Moments operator-(const Moments& o) const { return {m0 - o.m0, m1 - o.m1}; }
  double operator[](int i) const { return i == 0 ? m0 : m1[i - 1]; }
  Vec3 centroid() const { return m1 / m0; }
};

/* Oriented plane n.x = offset, n unit. Points with n.x - offset <= 0 are "below". */
struct Plane {
  Vec3 normal{0, 0, 1};
  double offset = 0;

  double signed_distance(const Vec3& p) const { return dot(normal, p) - offset; }
  Plane flipped() const { return {-normal, -offset}; }
};

/* A planar face. Usually one loop; caps of nonconvex cuts may carry several
   disjoint loops (holes run clockwise seen from outside). */
struct Face {
  std::vector<std::vector<int>> loops;
  Vec3 normal{};
  double offset = 0;
};

struct RigidTransform {
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const;
  Vec3 rotate(const Vec3& p) const;

  static RigidTransform identity() { return {}; }
  static RigidTransform translate(const Vec3& t);
  /* R = Rz(tz) Ry(ty) Rx(tx); sines and cosines of exact quarter turns are exact. */
  static RigidTransform from_angles(double tx, double ty, double tz, const Vec3& t = {});
  RigidTransform compose(const RigidTransform& inner) const;  // this ∘ inner
};

class Polyhedron {
 public:
  Polyhedron() = default;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  bool empty() const { return faces_.empty(); }
  std::size_t loop_count() const;
  double diameter() const;
  void bounds(Vec3& lo, Vec3& hi) const;

  /* Caller guarantees validity; only face planes are recomputed. */
  static Polyhedron from_trusted(std::vector<Vec3> vertices, std::vector<Face> faces);

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  friend Polyhedron build_polyhedron(const std::vector<Vec3>&, const std::vector<std::vector<int>>&);
};

/* Single-loop faces; validates ranges, planarity (1e-12 of diameter), watertightness
   and outward orientation. */
Polyhedron build_polyhedron(const std::vector<Vec3>& vertices, const std::vector<std::vector<int>>& faces);

/* Validates an already assembled polyhedron (multi-loop faces allowed). Throws on failure. */
void validate(const Polyhedron& p);
bool is_watertight(const Polyhedron& p);

Moments polyhedron_moments(const Polyhedron& p);

/* Keeps the part with plane.signed_distance(x) <= 0 and closes it with cap loops. */
Polyhedron clip_by_halfspace(const Polyhedron& p, const Plane& plane);

Polyhedron transform(const Polyhedron& p, const RigidTransform& t);
/* Reflection through the plane x_axis = 0; loops are reversed to keep outward normals. */
Polyhedron mirror(const Polyhedron& p, int axis);
Polyhedron with_vertices(const Polyhedron& p, std::vector<Vec3> vertices);
Moments transform_moments(const Moments& m, const RigidTransform& t);

enum class ShapeKind { Tetrahedron, Cube, Dodecahedron, HollowCube };

ShapeKind parse_shape(const std::string& s);
const char* shape_name(ShapeKind k);
/* Centered at the origin. Without unit_volume the edge length (outer side for the
   hollow cube) is 1. */
Polyhedron make_shape(ShapeKind kind, bool unit_volume);

/* Plain-text mesh exchange: "v x y z" and "f i j k ..." lines, 1-based like OBJ,
   '#' comments. Extra loops of a face follow its "f" line as "h i j k ..." lines. */
void write_mesh(std::ostream& os, const Polyhedron& p);
Polyhedron read_mesh(std::istream& is);

}  // namespace quadclip
