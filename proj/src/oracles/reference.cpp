#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "quadclip/oracles.hpp"

namespace quadclip {

namespace bq = boost::math::quadrature;

namespace {

template <class F> double gk(F f, double a, double b) {
  return bq::gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-13);
}

template <class F> double ts(F f, double a, double b) {
  thread_local bq::tanh_sinh<double> integrator(12);
  if (!(b > a)) return 0.0;
  return integrator.integrate(f, a, b, 1e-15);
}

}  // namespace

Moments unit_cube_reference(double k) {
  if (!(k >= 0 && k <= 3)) throw Error(ErrorCode::OutOfRange, "unit_cube_reference: k outside [0, 3]");
  const double z0 = 1 - k / 2, z1 = 2 - k / 2;
  std::vector<double> br{0.0, 1.0};
  for (double z : {z0, z1})
    if (std::fabs(z) < 1) br.push_back(std::sqrt(1 - z * z));
  std::sort(br.begin(), br.end());
  auto bounds = [&](double y, double& lo, double& hi) {
    const double s = std::sqrt(std::max(0.0, 1 - y * y));
    lo = std::max(z0, -s);
    hi = std::min(z1, s);
    return hi > lo;
  };
  Moments m;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    if (b - a < 1e-300) continue;
    m.m0 += ts([&](double y) { double lo, hi; return bounds(y, lo, hi) ? hi - lo : 0.0; }, a, b);
    m.m1.y += ts([&](double y) { double lo, hi; return bounds(y, lo, hi) ? y * (hi - lo) : 0.0; }, a, b);
    m.m1.z += ts([&](double y) { double lo, hi; return bounds(y, lo, hi) ? 0.5 * (hi * hi - lo * lo) : 0.0; }, a, b);
  }
  m.m1.x = m.m0 / 2;
  return m;
}

namespace reference {

Vec4 b1(const Vec3& a, const Vec3& b, const Vec3& c) {
  // uniform average over the parameter triangle (s, t), s + t <= 1; the Jacobian is constant
  Vec4 r{};
  for (int comp = 0; comp < 4; ++comp) {
    auto f = [&](const Vec3& p) {
      switch (comp) {
        case 0: return p.z;
        case 1: return p.x * p.z;
        case 2: return p.y * p.z;
        default: return 0.5 * p.z * p.z;
      }
    };
    const double I = gk([&](double s) {
      return gk([&](double t) { return f(a + (b - a) * s + (c - a) * t); }, 0.0, 1.0 - s);
    }, 0.0, 1.0);
    r[comp] = 2 * I;
  }
  return r;
}

Vec4 b2(const Vec3& a, const Vec3& b) {
  Vec4 r{};
  for (int comp = 0; comp < 4; ++comp)
    r[comp] = gk([&](double t) {
      const Vec3 p = a + (b - a) * t;
      switch (comp) {
        case 0: return p.x * p.z;
        case 1: return 0.5 * p.x * p.x * p.z;
        case 2: return p.x * p.y * p.z;
        default: return 0.5 * p.x * p.z * p.z;
      }
    }, 0.0, 1.0);
  return r;
}

Vec4 m3(const Cylinder& c, const Plane& face, const RationalArc& arc) {
  const Vec3 n = face.normal;
  const double d = face.offset;
  auto zF = [&](double x, double y) { return (d - n.x * x - n.y * y) / n.z; };
  // ∫_0^x of [z_F, x' z_F, y z_F, z_F^2/2] dx'; cubic in x', so 3 Gauss nodes are exact
  auto psiF = [&](double x, double y, int comp) {
    return bq::gauss<double, 3>::integrate([&](double xp) {
      const double z = zF(xp, y);
      switch (comp) {
        case 0: return z;
        case 1: return xp * z;
        case 2: return y * z;
        default: return 0.5 * z * z;
      }
    }, 0.0, x);
  };
  auto psiS = [&](double x, double y, int comp) {
    const double h2 = std::max(0.0, c.alpha * c.alpha - c.beta * y * y), h = std::sqrt(h2);
    switch (comp) {
      case 0: return x * h;
      case 1: return 0.5 * x * x * h;
      case 2: return x * y * h;
      default: return 0.5 * x * h2;
    }
  };
  const double w = arc.w;
  const Vec3 &p0 = arc.p0, &p1 = arc.p1, &xs = arc.xstar;
  auto dydt = [&](double t) {
    const double b0 = (1 - t) * (1 - t), b1 = 2 * w * t * (1 - t), b2 = t * t;
    const double N = b0 * p0.y + b1 * xs.y + b2 * p1.y, D = b0 + b1 + b2;
    const double dN = -2 * (1 - t) * p0.y + 2 * w * (1 - 2 * t) * xs.y + 2 * t * p1.y;
    const double dD = -2 * (1 - t) + 2 * w * (1 - 2 * t) + 2 * t;
    return (dN * D - N * dD) / (D * D);
  };
  Vec4 r{};
  for (int comp = 0; comp < 4; ++comp) {
    const double I1 = ts([&](double t) {
      const Vec3 p = arc.point(t);
      return (psiF(p.x, p.y, comp) - psiS(p.x, p.y, comp)) * dydt(t);
    }, 0.0, 1.0);
    const double I2 = gk([&](double t) {
      const Vec3 p = p0 + (p1 - p0) * t;
      double psiR;
      switch (comp) {
        case 0: psiR = p.x * p.z; break;
        case 1: psiR = 0.5 * p.x * p.x * p.z; break;
        case 2: psiR = p.x * p.y * p.z; break;
        default: psiR = 0.5 * p.x * p.z * p.z;
      }
      return (psiF(p.x, p.y, comp) - psiR) * (p1.y - p0.y);
    }, 0.0, 1.0);
    r[comp] = I1 - I2;
  }
  return r;
}

}  // namespace reference

}  // namespace quadclip
