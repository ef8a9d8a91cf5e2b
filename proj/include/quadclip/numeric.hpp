#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include <quadmath.h>

namespace quadclip {

using quad = __float128;

/* Small overload set so the templated kernels can run in double or quad. */
inline double sqrt_(double x) { return std::sqrt(x); }
inline quad sqrt_(quad x) { return sqrtq(x); }
inline double abs_(double x) { return std::fabs(x); }
inline quad abs_(quad x) { return fabsq(x); }
inline double atan2_(double y, double x) { return std::atan2(y, x); }
inline quad atan2_(quad y, quad x) { return atan2q(y, x); }

template <class T> struct num;

template <> struct num<double> {
  static constexpr double eps = 2.220446049250313e-16;  // 2^-52
  static double to_double(double x) { return x; }
};

template <> struct num<quad> {
  static constexpr double eps_d = 1.925929944387236e-34;  // 2^-112
  static inline const quad eps = quad(1) / (quad(uint64_t(1) << 56) * quad(uint64_t(1) << 56));
  static double to_double(quad x) { return double(x); }
};

template <class T> inline bool finite_(T x) { return std::isfinite(double(x)); }

}  // namespace quadclip
