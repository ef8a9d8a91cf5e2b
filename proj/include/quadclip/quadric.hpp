#pragma once

#include <vector>

#include "polytope.hpp"

namespace quadclip {

inline constexpr double kEps64 = 2.220446049250313e-16;

/* phi(x) = beta y^2 + z^2 - alpha^2; Q = {phi <= 0}. beta > 0 elliptic, beta < 0 hyperbolic. */
struct Cylinder {
  double alpha = 1;
  double beta = 1;

  Cylinder() = default;
  Cylinder(double a, double b);  // throws InvalidCylinder
  bool elliptic() const { return beta > 0; }
};

/* Rational quadratic Bezier: (b0 p0 + 2 w t (1-t) xstar + b2 p1) / (b0 + 2 w t (1-t) + b2). */
struct RationalArc {
  Vec3 p0, p1, xstar;
  double w = 1;
  int face_index = -1;

  Vec3 point(double t) const;
};

struct RobustnessConfig {
  double eps_corner = 1e2 * kEps64;   // near-on-surface vertex, relative to alpha^2
  double eps_tangent = 1e6 * kEps64;  // sine of the edge/surface angle
  double eps_nudge = 1e4 * kEps64;    // 64-bit nudge distance, relative to mesh diameter
  int max_nudge_attempts = 10;
  /* Evaluate ill-posed cases in 128-bit arithmetic with a nudge of 1e10 eps_128;
     when false the whole pipeline stays in double with eps_nudge. */
  bool extended_precision = true;
};

double phi_eval(const Cylinder& c, const Vec3& x);
Vec3 phi_grad(const Cylinder& c, const Vec3& x);

/* Upper-sheet height sqrt(alpha^2 - beta y^2). Throws OutOfDomain outside the strip. */
double surface_z(const Cylinder& c, double y);

/* Roots of phi((1-t) a + t b) in (0, 1), ascending. Throws TangencyAmbiguous when the
   segment meets S at an angle below eps_tangent. */
std::vector<double> intersect_edge(const Cylinder& c, const Vec3& a, const Vec3& b, const RobustnessConfig& cfg = {});

/* Conic arc on the z >= 0 sheet from p0 to p1 inside the face plane, following the direction
   n x grad(phi). Split into several arcs when needed. Throws DegenerateConic. */
std::vector<RationalArc> build_arc(const Cylinder& c, const Vec3& p0, const Vec3& p1, const Plane& face_plane);

/* Moves vertices with |phi| < eps_corner alpha^2 and endpoints of near-tangent edges by
   eps_nudge * diameter along hashed directions until clean. Throws NudgeExhausted. */
Polyhedron nudge(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg = {}, int* attempts = nullptr);

}  // namespace quadclip
