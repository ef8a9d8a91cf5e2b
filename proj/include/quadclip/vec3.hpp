#pragma once

#include <array>

#include "numeric.hpp"

namespace quadclip {

template <class T> struct Vec3T {
  T x{}, y{}, z{};

  constexpr Vec3T() = default;
  constexpr Vec3T(T a, T b, T c) : x(a), y(b), z(c) {}
  template <class U> explicit Vec3T(const Vec3T<U>& o) : x(T(o.x)), y(T(o.y)), z(T(o.z)) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3T operator-() const { return {-x, -y, -z}; }
  Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
  Vec3T operator/(T s) const { return {x / s, y / s, z / s}; }
  Vec3T& operator+=(const Vec3T& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3T& operator-=(const Vec3T& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  bool operator==(const Vec3T& o) const { return x == o.x && y == o.y && z == o.z; }
  bool operator!=(const Vec3T& o) const { return !(*this == o); }
};

template <class T> inline Vec3T<T> operator*(T s, const Vec3T<T>& v) { return v * s; }
template <class T> inline T dot(const Vec3T<T>& a, const Vec3T<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
template <class T> inline Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <class T> inline T norm2(const Vec3T<T>& a) { return dot(a, a); }
template <class T> inline T norm(const Vec3T<T>& a) { return sqrt_(dot(a, a)); }
template <class T> inline Vec3T<T> normalized(const Vec3T<T>& a) { return a / norm(a); }
template <class T> inline Vec3T<T> lerp(const Vec3T<T>& a, const Vec3T<T>& b, T t) { return a + (b - a) * t; }

using Vec3 = Vec3T<double>;

}  // namespace quadclip
