#pragma once

#include <array>
#include <optional>
#include <vector>

#include "polytope.hpp"
#include "quadric.hpp"

namespace quadclip {

using Vec4 = std::array<double, 4>;

double op_A(const Vec3& a, const Vec3& b, const Vec3& c);
double op_A_dagger(const Vec3& a, const Vec3& b, const Vec3& c);
Vec4 op_B1(const Vec3& a, const Vec3& b, const Vec3& c);
Vec4 op_B2(const Vec3& a, const Vec3& b);

double theta(double w);   // w >= 0
double lambda(double w);  // throws SingularWeight at |w| = 1

enum class B3Path { Auto, Direct, Taylor };

/* The six scalar weight functions of B3: g_k = Lambda^2 (K D)_k for k < 2, Lambda^3 (K D)_k
   otherwise. Auto uses the order-40 series in u = w - 1 on [0.35, 1.7]. */
class B3Evaluator {
 public:
  static constexpr double window_lo = 0.35;
  static constexpr double window_hi = 1.7;
  static constexpr int order = 40;

  static const B3Evaluator& instance();
  std::array<double, 6> weights(double w, B3Path path = B3Path::Auto) const;
  std::array<double, 6> direct(double w) const;
  std::array<double, 6> taylor(double w) const;
  static double K(int i, int j);  // 0-based
};

/* Throws NonPositiveWeight for w <= 0. */
Vec4 op_B3(double w, const Vec3& a, const Vec3& b, const Vec3& c, B3Path path = B3Path::Auto);

struct ClippedEdge {
  Vec3 x0, x1;
  bool on_surface = false;
  std::optional<RationalArc> arc;
};

struct ClippedFace {
  int face_index = -1;
  std::vector<std::vector<ClippedEdge>> loops;
  Vec3 x_ref;
  int normal_sign = 0;
};

/* Requires z >= 0 everywhere and a clean (nudged) input. Throws TangencyAmbiguous or
   DegenerateConic. Split arcs appear as consecutive on-surface edges. */
std::vector<ClippedFace> build_clipped_faces(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg = {});

struct ClipStats {
  int nudge_count = 0;    // nudge rounds over both halves
  bool extended = false;  // some half went through the 128-bit path
};

/* Moments of p ∩ Q for p in z >= 0. */
Moments clip_moments_upper(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg = {},
                           ClipStats* stats = nullptr, bool zeroth_only = false);

/* Moments of p ∩ Q for any p: the z <= 0 part is turned about e_x and mapped back. */
Moments clip_moments(const Polyhedron& p, const Cylinder& c, const RobustnessConfig& cfg = {},
                     ClipStats* stats = nullptr, bool zeroth_only = false);

}  // namespace quadclip
