#pragma once

#include <array>

#include "../vec3.hpp"

namespace quadclip::detail {

template <class T> using Vec4T = std::array<T, 4>;

/* signed area of the xy-projection of triangle (a, b, c) */
template <class T> inline T op_A(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c) {
  return T(0.5) * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
}

/* same on the yz-plane */
template <class T> inline T op_A_dagger(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c) {
  return T(0.5) * (a.y * (b.z - c.z) + b.y * (c.z - a.z) + c.y * (a.z - b.z));
}

/* mean of [z, xz, yz, z^2/2] over the triangle (z linear) */
template <class T> inline Vec4T<T> op_B1(const Vec3T<T>& a, const Vec3T<T>& b, const Vec3T<T>& c, bool first = true) {
  const T sz = a.z + b.z + c.z;
  Vec4T<T> r{T(4) * sz / T(12), T(0), T(0), T(0)};
  if (!first) return r;
  r[1] = (sz * (a.x + b.x + c.x) + a.x * a.z + b.x * b.z + c.x * c.z) / T(12);
  r[2] = (sz * (a.y + b.y + c.y) + a.y * a.z + b.y * b.z + c.y * c.z) / T(12);
  r[3] = (a.z * a.z + b.z * b.z + c.z * c.z + b.z * c.z + a.z * b.z + a.z * c.z) / T(12);
  return r;
}

/* ∫_0^1 [x z, x^2 z / 2, x y z, x z^2 / 2] dt along the segment a -> b */
template <class T> inline Vec4T<T> op_B2(const Vec3T<T>& a, const Vec3T<T>& b, bool first = true) {
  Vec4T<T> r{T(4) * (a.x * (T(2) * a.z + b.z) + b.x * (a.z + T(2) * b.z)) / T(24), T(0), T(0), T(0)};
  if (!first) return r;
  const T sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
  r[1] = (sz * sx * sx + T(2) * a.x * a.x * a.z + T(2) * b.x * b.x * b.z) / T(24);
  r[2] = T(2) * (sx * sy * sz + T(2) * a.x * a.y * a.z + T(2) * b.x * b.y * b.z) / T(24);
  r[3] = (sz * sz * sx + T(2) * a.x * a.z * a.z + T(2) * b.x * b.z * b.z) / T(24);
  return r;
}

}  // namespace quadclip::detail
