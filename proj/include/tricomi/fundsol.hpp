#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "tricomi/chi.hpp"
#include "tricomi/errors.hpp"
#include "tricomi/geometry.hpp"
#include "tricomi/hypergeometric.hpp"
#include "tricomi/special.hpp"

namespace tricomi {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Euler-Poisson-Darboux series coefficients
// ---------------------------------------------------------------------------

/// c_j for the EPD ansatz: closed form c_j = (-1/4)^j (alpha)_j (1-alpha)_j / j!
/// together with the recurrence (1/2)(j-1+alpha)(j-alpha) c_{j-1} + 2j c_j = 0.
/// Exact rational arithmetic so the two routes can be compared exactly.
struct EpdCoefficients {
  Rational alpha;
  std::vector<Rational> closed_form;    // c_0..c_J
  std::vector<Rational> by_recurrence;  // same, independently built

  double value(int j) const { return closed_form[j].convert_to<double>(); }
  bool routes_agree() const { return closed_form == by_recurrence; }
};

inline EpdCoefficients epd_coefficients(const Rational& alpha, int J) {
  if (J < 0) throw DomainError("epd_coefficients: J must be >= 0");
  EpdCoefficients out;
  out.alpha = alpha;
  out.closed_form.resize(J + 1);
  out.by_recurrence.resize(J + 1);
  // closed form via running Pochhammer products
  Rational poch_a = 1, poch_b = 1, factorial = 1, quarter_pow = 1;
  for (int j = 0; j <= J; ++j) {
    if (j > 0) {
      poch_a *= alpha + (j - 1);
      poch_b *= (1 - alpha) + (j - 1);
      factorial *= j;
      quarter_pow *= Rational(-1, 4);
    }
    out.closed_form[j] = quarter_pow * poch_a * poch_b / factorial;
  }
  out.by_recurrence[0] = 1;
  for (int j = 1; j <= J; ++j)
    out.by_recurrence[j] =
        -Rational(1, 2) * (alpha + (j - 1)) * (Rational(j) - alpha) *
        out.by_recurrence[j - 1] / (2 * j);
  return out;
}

/// Pointwise truncation of the hypergeometric distribution
///   Phi_alpha = sum_j (alpha)_j (1-alpha)_j / j! (-1/(4 t0 t))^j
///               chi_{j+1/2-n/2}(k(x, t-t0))
/// in the regime where every chi factor is a function (n = 1, 2) and the
/// series ratio |k/(4 t0 t)| is below 1.
inline double phi_series_partial(double alpha, int n, double rho, double t, double t0,
                                 int J) {
  if (0.5 - 0.5 * n <= -1.0)
    throw DomainError("phi_series_partial: chi order at j=0 is not a function");
  const double k = k_radial(rho, t, t0);
  const double ratio = k / (4.0 * t0 * t);
  if (!(std::abs(ratio) < 1.0))
    throw DomainError("phi_series_partial: |k/(4 t0 t)| >= 1, series diverges");
  double coef = 1.0;  // (alpha)_j (1-alpha)_j / j! * (-1/(4 t0 t))^j
  double sum = 0.0;
  for (int j = 0; j <= J; ++j) {
    if (j > 0)
      coef *= (alpha + (j - 1)) * (1.0 - alpha + (j - 1)) / j * (-1.0 / (4.0 * t0 * t));
    sum += coef * chi_pointwise(j + 0.5 - 0.5 * n, k);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Kernel specification and constants
// ---------------------------------------------------------------------------

enum class Parity { One, Even, Odd };

inline Parity parity_of(int n) {
  if (n < 1) throw DomainError("parity_of: n >= 1 required");
  if (n == 1) return Parity::One;
  return (n % 2 == 0) ? Parity::Even : Parity::Odd;
}

struct KernelSpec {
  int n;
  Parity parity;
  SourcePoint source;
  Branch branch = Branch::Upper;
  int m = 0;  // (n-1)/2 for odd parity
};

inline KernelSpec make_kernel_spec(int n, double b, Branch br = Branch::Upper) {
  KernelSpec s{n, parity_of(n), SourcePoint::from_b(b), br, 0};
  if (s.parity == Parity::Odd) s.m = (n - 1) / 2;
  return s;
}

/// c_j of the odd-n layer coefficients: Gamma(j+5/6)Gamma(j+1/6) /
/// (Gamma(5/6)Gamma(1/6)Gamma(j+1)) = (5/6)_j (1/6)_j / j!.
inline double odd_layer_cj(int j) {
  return pochhammer(5.0 / 6.0, j) * pochhammer(1.0 / 6.0, j) / gamma_fn(j + 1.0);
}

/// All closed-form constants for dimension n, computed from Gamma and Gauss
/// summation at runtime (nothing hard-coded).
struct ConstantsRecord {
  int n = 0;
  double C_minus = 0.0;       // 3^n Gamma(4/3) / (2^{2/3} pi^{n/2} Gamma(4/3-n/2))
  double C_plus = 0.0;        // -3^{n-2} Gamma(n/2-1/3) / (2^{2/3} pi^{n/2} Gamma(2/3))
  double ratio_closed = 0.0;  // -1 / (2 sqrt(3) sin(pi(n/2 - 1/3)))
  double A = 0.0;             // multiplicative constant of F_- from the E_- limit
  double c_n = std::numeric_limits<double>::quiet_NaN();  // n = 1 or even
  double A_m = std::numeric_limits<double>::quiet_NaN();  // odd
  double gauss_factor = std::numeric_limits<double>::quiet_NaN();  // odd
};

inline ConstantsRecord constants(int n) {
  ConstantsRecord r;
  r.n = n;
  const double half_n = 0.5 * n;
  r.C_minus = std::pow(3.0, n) * gamma_fn(4.0 / 3.0) /
              (std::pow(2.0, 2.0 / 3.0) * std::pow(kPi, half_n) *
               gamma_fn(4.0 / 3.0 - half_n));
  r.C_plus = -std::pow(3.0, n - 2.0) * gamma_fn(half_n - 1.0 / 3.0) /
             (std::pow(2.0, 2.0 / 3.0) * std::pow(kPi, half_n) * gamma_fn(2.0 / 3.0));
  r.ratio_closed = -1.0 / (2.0 * std::sqrt(3.0) * std::sin(kPi * (half_n - 1.0 / 3.0)));
  if (parity_of(n) == Parity::Odd) {
    const int m = (n - 1) / 2;
    r.A_m = 1.0 / (std::pow(2.0, 1.0 / 3.0) * std::pow(3.0, 1.0 / 3.0) * std::pow(kPi, m));
    r.A = ((m % 2 == 0) ? 1.0 : -1.0) * std::pow(3.0, 2.0 * m) /
          (std::pow(2.0, 1.0 / 3.0) * std::pow(kPi, m)) * odd_layer_cj(m);
    r.gauss_factor = gauss_at_one({1.0 / 6.0, m + 1.0 / 6.0, m + 1.0});
  } else {
    r.c_n = std::pow(kPi, 0.5 - half_n) /
            (std::pow(2.0, 1.0 / 3.0) * std::pow(3.0, 1.0 - n) * gamma_fn(1.5 - half_n));
    r.A = r.c_n * gauss_at_one({2.0 / 3.0 - half_n, 1.0 / 6.0, 1.5 - half_n});
  }
  return r;
}

struct IdentityResiduals {
  double gamma_identity;  // |2^{1/3} sqrt(pi) Gamma(2/3) / (3 Gamma(5/6) Gamma(4/3)) - 1|
  double a_vs_c_minus;    // |A - C_-| (even, n=1) or |A F(...;1) - C_-| (odd)
  double ratio;           // |C_+/C_- - closed form|
};

inline IdentityResiduals constant_identities(int n) {
  const ConstantsRecord r = constants(n);
  IdentityResiduals out{};
  out.gamma_identity =
      std::abs(std::pow(2.0, 1.0 / 3.0) * std::sqrt(kPi) * gamma_fn(2.0 / 3.0) /
                   (3.0 * gamma_fn(5.0 / 6.0) * gamma_fn(4.0 / 3.0)) -
               1.0);
  if (parity_of(n) == Parity::Odd)
    out.a_vs_c_minus = std::abs(r.A * r.gauss_factor - r.C_minus);
  else
    out.a_vs_c_minus = std::abs(r.A - r.C_minus);
  out.ratio = std::abs(r.C_plus / r.C_minus - r.ratio_closed);
  return out;
}

// ---------------------------------------------------------------------------
// E_- : fundamental solution supported by the closure of D^n_{b,-}
// ---------------------------------------------------------------------------

namespace detail {

/// Hypergeometric parameter triple of the E_- closed form per parity.
inline HypTriple e_minus_triple(const KernelSpec& s) {
  switch (s.parity) {
    case Parity::One: return {1.0 / 6.0, 1.0 / 6.0, 1.0};
    case Parity::Even: return {2.0 / 3.0 - 0.5 * s.n, 1.0 / 6.0, 1.5 - 0.5 * s.n};
    case Parity::Odd: return {1.0 / 6.0, s.m + 1.0 / 6.0, s.m + 1.0};
  }
  throw DomainError("unreachable");
}

}  // namespace detail

/// Density of E_- at interior points given (u, v) directly (u < 0, v < u).
/// Exposed so quadrature can form u from exact boundary distances.
inline double eval_E_minus_from_uv(const KernelSpec& s, double u, double v) {
  const double z = u / v;
  const double F = hyp2f1_real(detail::e_minus_triple(s), z);
  switch (s.parity) {
    case Parity::One:
      return std::pow(-v, -1.0 / 6.0) / std::pow(2.0, 1.0 / 3.0) * F;
    case Parity::Even: {
      const ConstantsRecord r = constants(s.n);
      return r.c_n * std::pow(-u, 0.5 - 0.5 * s.n) * std::pow(-v, -1.0 / 6.0) * F;
    }
    case Parity::Odd: {
      const ConstantsRecord r = constants(s.n);
      const double sign = (s.m % 2 == 0) ? 1.0 : -1.0;
      return sign * r.A_m * odd_layer_cj(s.m) * std::pow(-v / 9.0, -s.m - 1.0 / 6.0) * F;
    }
  }
  throw DomainError("unreachable");
}

/// E_-(x, y; 0, b): the locally integrable density (for odd n, the absolutely
/// continuous part; the boundary layers come from singular_layers). Returns 0
/// outside the closure of D^n_{b,-}; on the support boundary the n-even factor
/// (-u)^{1/2-n/2} diverges and +infinity is returned as the flag.
inline double eval_E_minus_radial(const KernelSpec& s, double rho, double y) {
  const RegionTag tag = classify_radial(rho * rho, y, s.source);
  if (tag == RegionTag::EllipticHalf || tag == RegionTag::DPlus) return 0.0;
  const auto [u, v] = uv_radial(rho * rho, y, s.source.a);
  if (tag == RegionTag::DMinusBoundary) {
    if (s.parity == Parity::Even) return std::numeric_limits<double>::infinity();
    if (v >= 0.0) return 0.0;  // vertex-degenerate corner
    return eval_E_minus_from_uv(s, std::min(u, -0.0), v);
  }
  return eval_E_minus_from_uv(s, u, v);
}

inline double eval_E_minus(const KernelSpec& s, std::span<const double> x, double y) {
  return eval_E_minus_radial(s, std::sqrt(norm2(x)), y);
}

/// The (x, t) form of the same density (Pfaff-transformed closed form), used
/// by the two-path consistency tests. Values agree with eval_E_minus after the
/// change of variables.
inline double eval_E_minus_xt_radial(const KernelSpec& s, double rho, double t) {
  const double t0 = s.source.a;
  const double k = k_radial(rho, t, t0);
  if (k <= 0.0) return 0.0;
  const double plus = (t + t0) * (t + t0) - rho * rho;
  const double ratio = k / plus;
  const double F = hyp2f1_real(detail::e_minus_triple(s), ratio);
  const double croot = std::pow(2.0, 1.0 / 3.0) * std::pow(3.0, 1.0 / 3.0);
  switch (s.parity) {
    case Parity::One:
      return std::pow(plus, -1.0 / 6.0) / croot * F;
    case Parity::Even:
      return std::pow(kPi, 0.5 - 0.5 * s.n) / croot *
             chi_pointwise(0.5 - 0.5 * s.n, k) * std::pow(plus, -1.0 / 6.0) * F;
    case Parity::Odd: {
      const ConstantsRecord r = constants(s.n);
      const double sign = (s.m % 2 == 0) ? 1.0 : -1.0;
      return sign * r.A_m * odd_layer_cj(s.m) * std::pow(plus, -s.m - 1.0 / 6.0) * F;
    }
  }
  throw DomainError("unreachable");
}

// ---------------------------------------------------------------------------
// E-tilde and E_+ (n = 1)
// ---------------------------------------------------------------------------

/// E~ density from real (u, v) (the y <= 0 half-plane), with the branch
/// assembly described at eval_tilde_E_radial. Exposed so quadrature can form
/// u and v from exact distances to the singular curves.
inline Complex eval_tilde_E_from_uv(double u, double v, Branch br) {
  static const HypTriple p{1.0 / 6.0, 1.0 / 6.0, 1.0};
  const double curt2 = std::pow(2.0, 1.0 / 3.0);
  const double sigma = (br == Branch::Upper) ? 1.0 : -1.0;
  if (v == 0.0)
    throw SingularLocusError("eval_tilde_E: on the characteristic locus v = 0");
  if (v < 0.0) {
    double z = u / v;
    if (std::abs(z - 1.0) < 1e-14) z = 1.0;  // y -> 0 pinch, Gauss limit
    return Complex(std::pow(-v, -1.0 / 6.0) / curt2 * hyp2f1_real(p, z));
  }
  // v > 0: zeta = u/v >= 1 lies on the hypergeometric cut
  const Complex pref =
      std::pow(v, -1.0 / 6.0) / curt2 * std::exp(Complex(0.0, -sigma * kPi / 6.0));
  const double zeta = u / v;
  if (zeta < 1.0 + 1e-14) return pref * gauss_at_one(p);
  return pref * hyp2f1(p, Complex(zeta, 0.0), br).value;
}

/// The branched extension of the n = 1 kernel to all of R^2 minus {v = 0}:
///   E~(x, y) = 2^{-1/3} (-v)^{-1/6} F~(1/6, 1/6, 1; u/v).
/// Branch::Upper assembles the continuation through the upper side of the
/// hypergeometric cut: for y < 0, v > 0 the prefactor carries e^{-i pi/6} and
/// F~ takes its limit from Im zeta > 0; for y > 0 it pairs with
/// Im u = +12 a y^{3/2}. Lower is the complex conjugate assembly. The two
/// agree (real) wherever v < 0.
inline BranchedValue eval_tilde_E_radial(double rho, double y, const SourcePoint& src,
                                         Branch br) {
  static const HypTriple p{1.0 / 6.0, 1.0 / 6.0, 1.0};
  const double curt2 = std::pow(2.0, 1.0 / 3.0);
  if (y > 0.0) {
    const auto [u, v] = complex_uv_radial(rho * rho, y, src.a, br);
    const Complex F = hyp2f1(p, u / v).value;
    return {std::pow(-v, Complex(-1.0 / 6.0)) / curt2 * F, br};
  }
  const auto [u, v] = uv_radial(rho * rho, y, src.a);
  const double scale = std::max({1.0, std::abs(u), 9.0 * src.a * src.a});
  if (std::abs(v) <= 1e-13 * scale)
    throw SingularLocusError("eval_tilde_E: on the characteristic locus v = 0");
  return {eval_tilde_E_from_uv(u, v, br), br};
}

inline BranchedValue eval_tilde_E(std::span<const double> x, double y,
                                  const SourcePoint& src, Branch br) {
  return eval_tilde_E_radial(std::sqrt(norm2(x)), y, src, br);
}

/// E_+ = -E~ on D_{b,+}, 0 on D_{b,-}; a fundamental solution supported by the
/// closure of the complement region.
inline BranchedValue eval_E_plus_radial(double rho, double y, const SourcePoint& src,
                                        Branch br) {
  if (classify_radial(rho * rho, y, src) == RegionTag::DMinusInterior)
    return {Complex(0.0), br};
  const BranchedValue t = eval_tilde_E_radial(rho, y, src, br);
  return {-t.value, br};
}

inline BranchedValue eval_E_plus(std::span<const double> x, double y,
                                 const SourcePoint& src, Branch br) {
  return eval_E_plus_radial(std::sqrt(norm2(x)), y, src, br);
}

// ---------------------------------------------------------------------------
// F_- and F_+ : fundamental solutions relative to the origin
// ---------------------------------------------------------------------------

/// F_- = C_-(n) |9|x|^2 + 4y^3|^{1/3 - n/2} on D_-^n, 0 elsewhere. On the cusp
/// curve the density diverges; +infinity is the boundary flag.
inline double eval_F_minus_radial(int n, double rho, double y) {
  const double w = 9.0 * rho * rho + 4.0 * y * y * y;
  if (w > 0.0) return 0.0;
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return constants(n).C_minus * std::pow(-w, 1.0 / 3.0 - 0.5 * n);
}

inline double eval_F_minus(int n, std::span<const double> x, double y) {
  return eval_F_minus_radial(n, std::sqrt(norm2(x)), y);
}

/// F_+ = C_+(n) (9|x|^2 + 4y^3)^{1/3 - n/2} on D_+^n, 0 elsewhere. For n = 1
/// the constant is taken in the form -2^{-1/3} 3^{-1/2} F(1/6,1/6,1;1); it
/// coincides with C_+(1).
inline double eval_F_plus_radial(int n, double rho, double y,
                                 Branch /*br*/ = Branch::Upper) {
  const double w = 9.0 * rho * rho + 4.0 * y * y * y;
  if (w < 0.0) return 0.0;
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  double cplus;
  if (n == 1)
    cplus = -gauss_at_one({1.0 / 6.0, 1.0 / 6.0, 1.0}) /
            (std::pow(2.0, 1.0 / 3.0) * std::sqrt(3.0));
  else
    cplus = constants(n).C_plus;
  return cplus * std::pow(w, 1.0 / 3.0 - 0.5 * n);
}

inline double eval_F_plus(int n, std::span<const double> x, double y,
                          Branch br = Branch::Upper) {
  return eval_F_plus_radial(n, std::sqrt(norm2(x)), y, br);
}

// ---------------------------------------------------------------------------
// Odd-n boundary layers
// ---------------------------------------------------------------------------

/// One surface-delta term of the odd-n kernel: the distribution
///   coeff(y) * delta^{(order)}( k-pullback ) on the conoid surface u = 0,
/// y <= b, with coeff(y) = A_m (-1)^j c_j ((u-v)/9)^{-j-1/6} and
/// (u-v)/9 = (8/3) a (-y)^{3/2} = 4 t0 t > 0 on the surface.
///
/// The paper's notation writes the layers against delta^{(q)}(u(.)); the
/// defining level function here is the pullback of k, i.e. -u/9, and
/// `level_normalization` = 9^{order+1} (-1)^{order} converts a plain
/// delta^{(order)}(u) pairing into the k-pullback one.
struct LayerTerm {
  int j = 0;
  int order = 0;
  double coeff_scale = 0.0;  // A_m (-1)^j c_j
  double exponent = 0.0;     // -j - 1/6
  double level_normalization = 1.0;
  SourcePoint src{-1.0, 2.0 / 3.0};

  double coefficient_at(double y) const {
    return coeff_scale * std::pow((8.0 / 3.0) * src.a * std::pow(-y, 1.5), exponent);
  }
};

inline std::vector<LayerTerm> singular_layers(const KernelSpec& s) {
  if (s.parity != Parity::Odd)
    throw DomainError("singular_layers: defined for odd n >= 3 only");
  const ConstantsRecord r = constants(s.n);
  std::vector<LayerTerm> terms;
  for (int j = 0; j <= s.m - 1; ++j) {
    LayerTerm t;
    t.j = j;
    t.order = s.m - 1 - j;
    t.coeff_scale = r.A_m * ((j % 2 == 0) ? 1.0 : -1.0) * odd_layer_cj(j);
    t.exponent = -j - 1.0 / 6.0;
    t.level_normalization =
        std::pow(9.0, t.order + 1) * ((t.order % 2 == 0) ? 1.0 : -1.0);
    t.src = s.source;
    terms.push_back(t);
  }
  return terms;
}

}  // namespace tricomi
