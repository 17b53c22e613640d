#pragma once

#include <cmath>
#include <limits>

#include "tricomi/errors.hpp"

namespace tricomi {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
  return x <= tol && std::abs(x - std::round(x)) <= tol;
}

/// Distance of x to the nearest integer.
inline double integer_distance(double x) { return std::abs(x - std::round(x)); }

namespace detail {

// Lanczos, g = 7, 9 terms. Relative error a few ulps over the range used here.
inline double lanczos_sum(double x) {
  static constexpr double kCoef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  double s = kCoef[0];
  for (int k = 1; k < 9; ++k) s += kCoef[k] / (x + k);
  return s;
}

inline double gamma_positive(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  const double t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

}  // namespace detail

/// Gamma function for real non-pole arguments.
inline double gamma_fn(double x) {
  if (is_nonpositive_integer(x))
    throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));
  if (x >= 0.5) return detail::gamma_positive(x);
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  return kPi / (std::sin(kPi * x) * detail::gamma_positive(1.0 - x));
}

/// Pochhammer symbol (a)_j = a (a+1) ... (a+j-1), (a)_0 = 1.
inline double pochhammer(double a, int j) {
  double p = 1.0;
  for (int i = 0; i < j; ++i) p *= a + i;
  return p;
}

/// Digamma for real non-pole arguments.
inline double digamma(double x) {
  if (is_nonpositive_integer(x))
    throw DomainError("digamma: pole at non-positive integer " + std::to_string(x));
  if (x < 0.5) {
    // psi(x) = psi(1-x) - pi cot(pi x)
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double acc = 0.0;
  while (x < 9.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // asymptotic series with Bernoulli terms through x^{-12}
  const double inv = 1.0 / x, inv2 = inv * inv;
  double s = std::log(x) - 0.5 * inv;
  s -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
       inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
  return acc + s;
}

}  // namespace tricomi
