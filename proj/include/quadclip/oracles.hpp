#pragma once

#include <cstdint>

#include "moments.hpp"

namespace quadclip {

struct AmrConfig {
  int max_levels = 12;
  bool tangent_plane_leaf = true;  // otherwise leaf cells vote on the center sign
};

struct McConfig {
  uint64_t samples = 1000000;
  uint64_t seed = 1;
  uint64_t stream = 0;  // e.g. the case index
};

struct McResult {
  Moments m;
  Vec4 stderr_{};  // one standard error per component
};

/* Octree reference. Cells entirely filled by p are refined in 2D only since phi does not
   depend on x. Deterministic. */
Moments amr_moments(const Polyhedron& p, const Cylinder& c, const AmrConfig& cfg = {});

/* Uniform samples in the bounding box; point-in-polyhedron by signed ray crossings. */
McResult mc_moments(const Polyhedron& p, const Cylinder& c, const McConfig& cfg = {});

/* Unit cube centered at (1/2, 1/2, 3/2 - k/2) against alpha = beta = 1, by 1D quadrature
   of the cross-section slices. Throws OutOfRange outside [0, 3]. */
Moments unit_cube_reference(double k);

/* Quadrature references for the closed-form kernels. */
namespace reference {
/* mean of [z, xz, yz, z^2/2] over triangle abc, weighted by projected area */
Vec4 b1(const Vec3& a, const Vec3& b, const Vec3& c);
/* ∫_0^1 [xz, x^2 z/2, xyz, x z^2/2] along a -> b */
Vec4 b2(const Vec3& a, const Vec3& b);
/* The curvature correction of one arc on a face with n_z != 0: the integral of
   (Psi_F - Psi_S) dy along the arc minus (Psi_F - Psi_R) dy along its chord. */
Vec4 m3(const Cylinder& c, const Plane& face, const RationalArc& arc);
}  // namespace reference

namespace detail {
/* Point classification kernels, exposed for equivalence tests. Each triangle is stored as
   three affine forms (u, v, tau) of the sample point plus a crossing sign. */
struct RayTriangles {
  std::vector<double> coef;  // 13 per triangle
  std::size_t count = 0;
};
RayTriangles prepare_triangles(const Polyhedron& p, const Vec3& dir);
void classify_scalar(const RayTriangles& t, const double* x, const double* y, const double* z, std::size_t n,
                     double* winding, uint8_t* tie);
void classify_avx2(const RayTriangles& t, const double* x, const double* y, const double* z, std::size_t n,
                   double* winding, uint8_t* tie);
bool avx2_available();
}  // namespace detail

}  // namespace quadclip
