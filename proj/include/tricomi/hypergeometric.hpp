#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "tricomi/errors.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/special.hpp"

namespace tricomi {

using Complex = std::complex<double>;

/// Parameters (a, b, c) of the Gauss hypergeometric function. All real; c must
/// not be zero or a negative integer.
struct HypTriple {
  double a = 0.0, b = 0.0, c = 1.0;
};

inline void validate(const HypTriple& p) {
  if (is_nonpositive_integer(p.c))
    throw DomainError("hyp2f1: c is zero or a negative integer");
}

/// Side of the cut used for fractional powers and logs of non-positive reals.
/// Upper means the limit taken from the upper half-plane of the continued
/// variable (z + i0 for the hypergeometric argument).
enum class Branch { Upper, Lower };

struct BranchedValue {
  Complex value;
  Branch branch = Branch::Upper;
};

namespace detail {

inline double rgamma(double x) {  // 1/Gamma, zero at the poles
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

/// log(w) for w = -mag (mag > 0) approached from Im w = side * 0+.
inline Complex sided_log_neg(double mag, int side) {
  return {std::log(mag), side * kPi};
}

inline Complex sided_pow_neg(double mag, double expo, int side) {
  return std::exp(expo * sided_log_neg(mag, side));
}

/// log(-z): principal for z off the real interval [0, inf); for z real > 0 the
/// side is the approach side of -z (opposite to that of z).
inline Complex log_minus(Complex z, int side_minus_z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return sided_log_neg(z.real(), side_minus_z);
  return std::log(-z);
}

inline Complex pow_minus(Complex z, double expo, int side_minus_z) {
  return std::exp(expo * log_minus(z, side_minus_z));
}

inline bool is_polynomial_case(const HypTriple& p) {
  return is_nonpositive_integer(p.a) || is_nonpositive_integer(p.b);
}

}  // namespace detail

/// Raw hypergeometric series. Converges for |z| < 1 (any z when a or b is a
/// non-positive integer, where it terminates). Truncation: last term below
/// 1e-16 x partial sum, hard cap 10000 terms.
inline Complex hyp2f1_series(const HypTriple& p, Complex z) {
  validate(p);
  Complex sum = 1.0, term = 1.0;
  for (int n = 0; n < 10000; ++n) {
    term *= (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1.0)) * z;
    sum += term;
    if (term == Complex(0.0)) return sum;  // terminated polynomial
    if (std::abs(term) < 1e-16 * std::abs(sum) && n > 2) return sum;
  }
  throw ConvergenceError("hyp2f1_series: 10000-term cap reached at |z| = " +
                         std::to_string(std::abs(z)));
}

/// Gauss summation F(a,b,c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).
inline double gauss_at_one(const HypTriple& p) {
  validate(p);
  if (!(p.c - p.a - p.b > 0.0))
    throw DomainError("gauss_at_one: requires c - a - b > 0");
  return gamma_fn(p.c) * gamma_fn(p.c - p.a - p.b) * detail::rgamma(p.c - p.a) *
         detail::rgamma(p.c - p.b);
}

inline BranchedValue hyp2f1(const HypTriple& p, Complex z, std::optional<Branch> br);

/// Pfaff transform (1-z)^{-b} F(c-a, b, c; z/(z-1)), principal branch of the
/// power. The transformed function is evaluated by the plain series inside its
/// disk and dispatched otherwise, so the transform is usable wherever z != 1.
inline BranchedValue pfaff_transform(const HypTriple& p, Complex z,
                                     Branch br = Branch::Upper) {
  validate(p);
  if (z == Complex(1.0)) throw DomainError("pfaff_transform: z = 1");
  const Complex w = z / (z - 1.0);
  const HypTriple q{p.c - p.a, p.b, p.c};
  Complex pref;
  Complex inner;
  if (z.imag() == 0.0 && z.real() > 1.0) {
    // 1-z is a negative real and w = z/(z-1) sits on the cut; both flip the
    // approach side relative to z
    const int side = (br == Branch::Upper) ? -1 : +1;
    pref = detail::sided_pow_neg(z.real() - 1.0, -p.b, side);
    inner = hyp2f1(q, w, (br == Branch::Upper) ? Branch::Lower : Branch::Upper).value;
  } else {
    pref = std::pow(1.0 - z, -p.b);
    inner = (std::abs(w) <= 0.8) ? hyp2f1_series(q, w) : hyp2f1(q, w, std::nullopt).value;
  }
  return {pref * inner, br};
}

namespace detail {

/// Connection to argument 1-z (requires c-a-b non-integer).
inline Complex one_minus_z_connection(const HypTriple& p, Complex z, int side_one_minus_z) {
  const double s = p.c - p.a - p.b;
  const Complex w = 1.0 - z;
  const double coef1 = gamma_fn(p.c) * gamma_fn(s) * rgamma(p.c - p.a) * rgamma(p.c - p.b);
  const double coef2 = gamma_fn(p.c) * gamma_fn(-s) * rgamma(p.a) * rgamma(p.b);
  Complex t1 = 0.0, t2 = 0.0;
  if (coef1 != 0.0) t1 = coef1 * hyp2f1_series({p.a, p.b, p.a + p.b - p.c + 1.0}, w);
  if (coef2 != 0.0) {
    Complex wp;
    if (w.imag() == 0.0 && w.real() < 0.0)
      wp = sided_pow_neg(-w.real(), s, side_one_minus_z);
    else
      wp = std::pow(w, s);
    t2 = coef2 * wp * hyp2f1_series({p.c - p.a, p.c - p.b, s + 1.0}, w);
  }
  return t1 + t2;
}

/// Two-term continuation in 1/z (requires a-b non-integer), |z| > 1.
inline Complex inverse_z_connection(const HypTriple& p, Complex z, int side_minus_z) {
  const Complex w = 1.0 / z;
  const double coef1 =
      gamma_fn(p.c) * gamma_fn(p.b - p.a) * rgamma(p.b) * rgamma(p.c - p.a);
  const double coef2 =
      gamma_fn(p.c) * gamma_fn(p.a - p.b) * rgamma(p.a) * rgamma(p.c - p.b);
  Complex t1 = 0.0, t2 = 0.0;
  if (coef1 != 0.0)
    t1 = coef1 * pow_minus(z, -p.a, side_minus_z) *
         hyp2f1_series({p.a, 1.0 - p.c + p.a, 1.0 - p.b + p.a}, w);
  if (coef2 != 0.0)
    t2 = coef2 * pow_minus(z, -p.b, side_minus_z) *
         hyp2f1_series({p.b, 1.0 - p.c + p.b, 1.0 - p.a + p.b}, w);
  return t1 + t2;
}

/// Logarithmic continuation for a = b (the double-pole case of the 1/z
/// formula), |z| > 1, c-a non-integer:
///   F(a,a,c;z) = G (-z)^{-a} sum_s (a)_s (a-c+1)_s / (s!)^2 z^{-s}
///                  [log(-z) + 2 psi(s+1) - psi(a+s) - psi(c-a-s)]
/// with G = Gamma(c) / (Gamma(a) Gamma(c-a)).
inline Complex log_continuation(const HypTriple& p, Complex z, int side_minus_z) {
  const double a = p.a, c = p.c;
  if (integer_distance(c - a) < 1e-9)
    throw DomainError("hyp2f1 log continuation: c - a integer unsupported");
  const Complex w = 1.0 / z;
  if (std::abs(w) > 0.99)
    throw DomainError("hyp2f1 log continuation: |z| too close to 1");
  const double G = gamma_fn(c) * rgamma(a) * rgamma(c - a);
  const Complex L = log_minus(z, side_minus_z);
  Complex u = 1.0;
  double h = 2.0 * digamma(1.0) - digamma(a) - digamma(c - a);
  Complex sum = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Complex term = u * (L + h);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum) && s > 2) break;
    if (s == 9999)
      throw ConvergenceError("hyp2f1 log continuation: term cap reached");
    u *= (a + s) * (a - c + 1.0 + s) / ((s + 1.0) * (s + 1.0)) * w;
    h += 2.0 / (s + 1.0) - 1.0 / (a + s) + 1.0 / (c - a - s - 1.0);
  }
  return G * pow_minus(z, -a, side_minus_z) * sum;
}

/// Taylor-step continuation of the hypergeometric ODE along a path from the
/// series disk to z, avoiding the singular points 0 and 1. `side` selects the
/// approach half-plane when z lies on the cut [1, inf).
inline Complex taylor_path(const HypTriple& p, Complex z, int side) {
  const double a = p.a, b = p.b, c = p.c;
  int sigma = side;
  if (sigma == 0) sigma = (z.imag() > 0.0) ? +1 : (z.imag() < 0.0 ? -1 : +1);
  // start point and optional detour above/below the cut region
  Complex start;
  const bool near_cut_corridor = (z.real() > 0.75 && std::abs(z.imag()) < 0.5 &&
                                  !(z.imag() == 0.0 && z.real() < 1.0));
  if (near_cut_corridor)
    start = Complex(0.0, 0.7 * sigma);
  else
    start = 0.6 * z / std::abs(z);
  Complex F = hyp2f1_series(p, start);
  Complex Fp = (a * b / c) * hyp2f1_series({a + 1.0, b + 1.0, c + 1.0}, start);
  Complex cur = start;
  for (int step = 0; step < 600; ++step) {
    const Complex to_go = z - cur;
    const double dist_target = std::abs(to_go);
    if (dist_target == 0.0) return F;
    const double dist_sing = std::min(std::abs(cur), std::abs(cur - 1.0));
    const double len = std::min(dist_target, 0.38 * dist_sing);
    const Complex h = to_go * (len / dist_target);
    // local Taylor recurrence at cur
    const Complex A = cur * (1.0 - cur);
    const Complex B = 1.0 - 2.0 * cur;
    const Complex C = c - (a + b + 1.0) * cur;
    const double D = -(a + b + 1.0);
    Complex fk = F, fk1 = Fp;  // f_k, f_{k+1} with f_1 = F'
    Complex w = fk + fk1 * h;
    Complex wp = fk1;
    Complex hpow = h;
    for (int k = 0; k < 120; ++k) {
      const Complex fk2 = -((double(k) + 1.0) * (B * double(k) + C) * fk1 +
                            (D * double(k) - double(k) * (double(k) - 1.0) - a * b) * fk) /
                          (A * (double(k) + 2.0) * (double(k) + 1.0));
      hpow *= h;
      const Complex dw = fk2 * hpow;
      w += dw;
      wp += (double(k) + 2.0) * fk2 * (hpow / h);
      fk = fk1;
      fk1 = fk2;
      if (std::abs(dw) < 1e-17 * std::abs(w) && k > 4) break;
      if (k == 119) throw ConvergenceError("hyp2f1 taylor step did not converge");
    }
    F = w;
    Fp = wp;
    cur += h;
  }
  throw ConvergenceError("hyp2f1 taylor path: step budget exhausted");
}

}  // namespace detail

/// Gauss hypergeometric function with real parameters and complex argument.
/// Regimes: series (|z| <= 0.8), Pfaff (|z/(z-1)| <= 0.8), 1/z continuation or
/// the a = b logarithmic form (|z| >= 1.25), argument-(1-z) connection or ODE
/// Taylor continuation in the remaining annulus. On the cut [1, inf) an
/// explicit branch is required and the one-sided limit is returned.
inline BranchedValue hyp2f1(const HypTriple& p, Complex z,
                            std::optional<Branch> br = std::nullopt) {
  validate(p);
  const Branch branch = br.value_or(Branch::Upper);
  if (z == Complex(0.0)) return {1.0, branch};
  if (detail::is_polynomial_case(p)) return {hyp2f1_series(p, z), branch};
  const bool on_axis = z.imag() == 0.0;
  if (on_axis && z.real() == 1.0) {
    if (p.c - p.a - p.b > 0.0) return {gauss_at_one(p), branch};
    throw DomainError("hyp2f1: z = 1 with c - a - b <= 0");
  }
  const bool on_cut = on_axis && z.real() > 1.0;
  if (on_cut && !br)
    throw CutError("hyp2f1: z on the cut [1, inf) requires an explicit branch");
  // approach side of -z and 1-z (sign flips relative to z)
  const int side = on_cut ? ((branch == Branch::Upper) ? -1 : +1) : 0;
  const double r = std::abs(z);
  if (r <= 0.8) return {hyp2f1_series(p, z), branch};
  if (std::abs(z / (z - 1.0)) <= 0.8) return pfaff_transform(p, z, branch);
  if (r >= 1.25) {
    if (p.a == p.b) return {detail::log_continuation(p, z, side), branch};
    if (integer_distance(p.a - p.b) > 0.05)
      return {detail::inverse_z_connection(p, z, side), branch};
    return {detail::taylor_path(p, z, side), branch};
  }
  if (std::abs(1.0 - z) <= 0.75 && integer_distance(p.c - p.a - p.b) > 0.05)
    return {detail::one_minus_z_connection(p, z, side), branch};
  return {detail::taylor_path(p, z, side), branch};
}

/// d/dz F(a,b,c;z) = (ab/c) F(a+1, b+1, c+1; z).
inline BranchedValue hyp2f1_derivative(const HypTriple& p, Complex z,
                                       std::optional<Branch> br = std::nullopt) {
  validate(p);
  auto inner = hyp2f1({p.a + 1.0, p.b + 1.0, p.c + 1.0}, z, br);
  return {(p.a * p.b / p.c) * inner.value, inner.branch};
}

/// Real-argument convenience: x < 1 off the cut, result is real.
inline double hyp2f1_real(const HypTriple& p, double x) {
  return hyp2f1(p, Complex(x, 0.0)).value.real();
}

/// Independent oracle: Euler integral
///   F(a,b,c;z) = int_0^1 t^{b-1} (1-t)^{c-b-1} (1-zt)^{-a} dt / B(b, c-b),
/// c > b > 0, z off the cut. Double-exponential quadrature handles the
/// endpoint singularities.
inline Complex hyp2f1_oracle(const HypTriple& p, Complex z) {
  validate(p);
  if (!(p.c > p.b && p.b > 0.0))
    throw DomainError("hyp2f1_oracle: requires c > b > 0");
  if (z.imag() == 0.0 && z.real() >= 1.0)
    throw DomainError("hyp2f1_oracle: z on the cut [1, inf)");
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-13;
  opt.max_level = 11;
  const double bex = p.b - 1.0, cex = p.c - p.b - 1.0;
  auto f = [&](double t, double dlo, double dhi) -> Complex {
    return std::pow(dlo, bex) * std::pow(dhi, cex) *
           std::exp(-p.a * std::log(1.0 - z * t));
  };
  const Complex integral = tanh_sinh<Complex>(f, 0.0, 1.0, opt);
  const double beta = gamma_fn(p.b) * gamma_fn(p.c - p.b) / gamma_fn(p.c);
  return integral / beta;
}

}  // namespace tricomi
