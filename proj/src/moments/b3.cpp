#include <cmath>

#include "quadclip/moments.hpp"

namespace quadclip {

namespace {

#include "b3_taylor.inc"

constexpr double kK[6][6] = {
    {1, -5.0 / 6, 0, 1.0 / 3, 0, 0},
    {0, 2.0 / 3, -2, 1.0 / 3, 0, 0},
    {-3.0 / 16, 23.0 / 96, -1.0 / 8, -1.0 / 8, 0, 1.0 / 24},
    {-1.0 / 8, 5.0 / 48, 1.0 / 8, -7.0 / 48, 0, 1.0 / 24},
    {0, -1.0 / 3, 5.0 / 4, -3.0 / 8, 0, 1.0 / 12},
    {0, 0, -1.0 / 4, 13.0 / 24, -1, 1.0 / 12},
};

}  // namespace

double theta(double w) {
  if (w < 1) {
    const double s = std::sqrt((1 - w) * (1 + w));
    return std::atan((1 - w) / s) / s;
  }
  if (w == 1) return 0.5;
  const double s = std::sqrt((w - 1) * (w + 1));
  return std::atanh((w - 1) / s) / s;
}

double lambda(double w) {
  if (std::fabs(w) == 1) throw Error(ErrorCode::SingularWeight, "lambda is singular at |w| = 1");
  return 1 / ((w - 1) * (w + 1));
}

const B3Evaluator& B3Evaluator::instance() {
  static const B3Evaluator e;
  return e;
}

double B3Evaluator::K(int i, int j) { return kK[i][j]; }

std::array<double, 6> B3Evaluator::direct(double w) const {
  const double t = theta(w);
  const double w2 = w * w;
  const double d[6] = {t * w, w2, t * w * w2, w2 * w2, t * w * w2 * w2, w2 * w2 * w2};
  const double L = 1 / ((w - 1) * (w + 1));
  const double L2 = L * L, L3 = L2 * L;
  std::array<double, 6> g{};
  for (int i = 0; i < 6; ++i) {
    double s = 0;
    for (int j = 0; j < 6; ++j) s += kK[i][j] * d[j];
    g[i] = s * (i < 2 ? L2 : L3);
  }
  return g;
}

std::array<double, 6> B3Evaluator::taylor(double w) const {
  const double u = w - 1;
  std::array<double, 6> g{};
  for (int i = 0; i < 6; ++i) {
    double s = kB3Taylor[order][i];
    for (int n = order - 1; n >= 0; --n) s = s * u + kB3Taylor[n][i];
    g[i] = s;
  }
  return g;
}

std::array<double, 6> B3Evaluator::weights(double w, B3Path path) const {
  if (path == B3Path::Direct) return direct(w);
  if (path == B3Path::Taylor) return taylor(w);
  return (w >= window_lo && w <= window_hi) ? taylor(w) : direct(w);
}

Vec4 op_B3(double w, const Vec3& a, const Vec3& b, const Vec3& c, B3Path path) {
  if (!(w > 0)) throw Error(ErrorCode::NonPositiveWeight, "B3 weight must be positive");
  const auto g = B3Evaluator::instance().weights(w, path);
  const double sx = a.x + b.x, sy = a.y + b.y, sz = a.z + b.z;
  return {sx * g[0] + c.x * g[1],
          sx * sx * g[2] + (a.x * a.x + b.x * b.x) * g[3] + sx * c.x * g[4] + c.x * c.x * g[5],
          2 * sx * sy * g[2] + 2 * (a.x * a.y + b.x * b.y) * g[3] + (sx * c.y + sy * c.x) * g[4] + 2 * c.x * c.y * g[5],
          2 * sx * sz * g[2] + 2 * (a.x * a.z + b.x * b.z) * g[3] + (sx * c.z + sz * c.x) * g[4] + 2 * c.x * c.z * g[5]};
}

}  // namespace quadclip
