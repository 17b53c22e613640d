#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <utility>

#include "tricomi/errors.hpp"
#include "tricomi/hypergeometric.hpp"

namespace tricomi {

/// Hyperbolic change of variables t = 2(-y)^{3/2}/3, y < 0.
inline double to_t(double y) {
  if (!(y < 0.0)) throw DomainError("to_t: requires y < 0");
  return 2.0 * std::pow(-y, 1.5) / 3.0;
}

inline double to_y(double t) {
  if (!(t > 0.0)) throw DomainError("to_y: requires t > 0");
  return -std::pow(1.5 * t, 2.0 / 3.0);
}

/// |d(x,y)/d(x,t)| = (2/3)^{1/3} t^{-1/3}.
inline double xy_xt_jacobian(double t) {
  if (!(t > 0.0)) throw DomainError("xy_xt_jacobian: requires t > 0");
  return std::pow(2.0 / 3.0, 1.0 / 3.0) * std::pow(t, -1.0 / 3.0);
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

/// Cone function k(x, t - t0): (t-t0)^2 - |x|^2 inside the forward semi-cone
/// t - t0 > |x|, zero elsewhere.
inline double k_radial(double rho, double t, double t0) {
  const double d = t - t0;
  if (d <= std::abs(rho)) return 0.0;
  return d * d - rho * rho;
}

inline double k_val(std::span<const double> x, double t, double t0) {
  return k_radial(std::sqrt(norm2(x)), t, t0);
}

/// Source point (0, b), b < 0, with a = t0 = 2(-b)^{3/2}/3.
struct SourcePoint {
  double b;
  double a;
  static SourcePoint from_b(double b) {
    if (!(b < 0.0)) throw DomainError("SourcePoint: requires b < 0");
    return {b, 2.0 * std::pow(-b, 1.5) / 3.0};
  }
};

/// u = 9(|x|^2 - a^2) + 12a(-y)^{3/2} + 4y^3 and the companion v with the
/// middle sign flipped. Defined for y <= 0.
inline std::pair<double, double> uv_radial(double rho2, double y, double a) {
  if (y > 0.0) throw DomainError("uv: requires y <= 0 (use complex_uv)");
  const double base = 9.0 * (rho2 - a * a) + 4.0 * y * y * y;
  const double m = 12.0 * a * std::pow(-y, 1.5);
  return {base + m, base - m};
}

inline std::pair<double, double> uv(std::span<const double> x, double y, double a) {
  return uv_radial(norm2(x), y, a);
}

/// Continuation of (u, v) to y > 0: (-y)^{3/2} becomes +- i y^{3/2} and u, v
/// are complex conjugates. Branch::Upper takes Im u = +12 a y^{3/2}.
inline std::pair<Complex, Complex> complex_uv_radial(double rho2, double y, double a,
                                                     Branch br) {
  if (!(y > 0.0)) throw DomainError("complex_uv: requires y > 0");
  const double re = 9.0 * (rho2 - a * a) + 4.0 * y * y * y;
  const double im = 12.0 * a * std::pow(y, 1.5) * (br == Branch::Upper ? 1.0 : -1.0);
  return {Complex(re, im), Complex(re, -im)};
}

inline std::pair<Complex, Complex> complex_uv(std::span<const double> x, double y,
                                              double a, Branch br) {
  return complex_uv_radial(norm2(x), y, a, br);
}

enum class RegionTag { DMinusInterior, DMinusBoundary, DPlus, EllipticHalf };

inline const char* to_string(RegionTag t) {
  switch (t) {
    case RegionTag::DMinusInterior: return "DMinusInterior";
    case RegionTag::DMinusBoundary: return "DMinusBoundary";
    case RegionTag::DPlus: return "DPlus";
    case RegionTag::EllipticHalf: return "EllipticHalf";
  }
  return "?";
}

/// Region of a point relative to D^n_{b,-}. Boundary tolerance:
/// |u| <= 1e-12 max(1, |v|), so downstream evaluators never divide by a
/// numerically vanishing pair.
inline RegionTag classify_radial(double rho2, double y, const SourcePoint& src) {
  if (y > 0.0) return RegionTag::EllipticHalf;
  const auto [u, v] = uv_radial(rho2, y, src.a);
  if (std::abs(u) <= 1e-12 * std::max(1.0, std::abs(v)) && y <= src.b)
    return RegionTag::DMinusBoundary;
  if (u < 0.0 && y < src.b) return RegionTag::DMinusInterior;
  return RegionTag::DPlus;
}

inline RegionTag classify(std::span<const double> x, double y, const SourcePoint& src) {
  return classify_radial(norm2(x), y, src);
}

/// g(y) = 12a(-y)^{3/2} + 4y^3; the conoid u = level is |x|^2 = a^2 +
/// (level - g(y))/9. g is strictly increasing on y <= b with maximum 9a^2 at b.
inline double cone_offset(double y, double a) {
  return 12.0 * a * std::pow(-y, 1.5) + 4.0 * y * y * y;
}

/// Sphere radius rho(y) of the conoid surface u = level at height y.
inline double cone_radius(const SourcePoint& src, double y, double level = 0.0) {
  if (!(y <= 0.0)) throw DomainError("cone_radius: requires y <= 0");
  const double rad = src.a * src.a + (level - cone_offset(y, src.a)) / 9.0;
  if (rad < 0.0) throw DomainError("cone_radius: outside the conoid range");
  return std::sqrt(rad);
}

/// Height of the conoid vertex for u = level <= 0 on the forward branch
/// (solves g(y) = 9a^2 + level, y <= b).
inline double cone_vertex_y(const SourcePoint& src, double level = 0.0) {
  if (level > 0.0) throw DomainError("cone_vertex_y: requires level <= 0");
  if (level == 0.0) return src.b;
  const double target = 9.0 * src.a * src.a + level;
  double hi = src.b;           // g(hi) = 9a^2 >= target
  double lo = src.b;
  double step = std::max(0.1, -src.b * 0.1);
  while (cone_offset(lo, src.a) > target) {
    lo -= step;
    step *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cone_offset(mid, src.a) > target)
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-15 * std::max(1.0, -lo)) break;
  }
  return 0.5 * (lo + hi);
}

/// Radius of the characteristic surface v = 0 (r_a for n = 1) at height y < 0.
inline double characteristic_radius(const SourcePoint& src, double y) {
  if (!(y <= 0.0)) throw DomainError("characteristic_radius: requires y <= 0");
  const double h = 12.0 * src.a * std::pow(-y, 1.5) - 4.0 * y * y * y;
  return std::sqrt(src.a * src.a + h / 9.0);
}

/// Radius of the cusp curve 9|x|^2 + 4y^3 = 0 at height y < 0.
inline double cusp_radius(double y) {
  if (!(y < 0.0)) throw DomainError("cusp_radius: requires y < 0");
  return 2.0 * std::pow(-y, 1.5) / 3.0;
}

}  // namespace tricomi
