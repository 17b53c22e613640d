#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "tricomi/bump.hpp"
#include "tricomi/errors.hpp"
#include "tricomi/geometry.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/special.hpp"

namespace tricomi {

/// chi_q(s) = s^q / Gamma(q+1) for s > 0, 0 for s <= 0. A function only for
/// q > -1; lower orders act through chi_action_1d / the layer operations.
inline double chi_pointwise(double q, double s) {
  if (!(q > -1.0)) throw DomainError("chi_pointwise: requires q > -1");
  if (s <= 0.0) return 0.0;
  return std::pow(s, q) / gamma_fn(q + 1.0);
}

/// Integration-by-parts depth that regularizes the pairing: q + k >= 1 ish.
inline int chi_default_depth(double q) {
  return std::max(0, (int)std::ceil(-q - 1e-12) + 1);
}

/// <chi_q, phi> computed at a forced integration-by-parts depth k:
///   (-1)^k int_0^inf s^{q+k} phi^(k)(s) ds / Gamma(q+k+1).
/// `f(k, s)` must return the exact k-th derivative of the test function;
/// support contained in [lo, hi] with lo allowed below 0 (only s > 0 matters).
template <class F>
double chi_action_1d_at_depth(double q, F&& f, double support_hi, int k,
                              const QuadOptions& opt = {}) {
  if (!(q + k > -1.0))
    throw DomainError("chi_action_1d_at_depth: depth too small for this q");
  if (support_hi <= 0.0) return 0.0;
  const double ex = q + k;
  QuadStats st;
  const double integral = tanh_sinh<double>(
      [&](double s, double dlo, double) { return std::pow(dlo, ex) * f(k, s); }, 0.0,
      support_hi, opt, &st);
  if (!st.converged)
    throw ConvergenceError("chi_action_1d: quadrature did not converge", st.est_error);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * integral / gamma_fn(ex + 1.0);
}

/// <chi_q, phi> for any real q; the result is checked for independence of the
/// integration-by-parts depth at k and k+1.
template <class F>
double chi_action_1d(double q, F&& f, double support_hi, const QuadOptions& opt = {}) {
  const int k = chi_default_depth(q);
  const double a = chi_action_1d_at_depth(q, f, support_hi, k, opt);
  const double b = chi_action_1d_at_depth(q, f, support_hi, k + 1, opt);
  const double scale = std::max({std::abs(a), std::abs(b), 1e-14});
  if (std::abs(a - b) > 1e-6 * scale)
    throw ConvergenceError("chi_action_1d: depth-consistency check failed",
                           std::abs(a - b));
  return a;
}

/// Residual of Euler's formula s chi_{q-1}(s) = q chi_q(s) in the weak form
/// |<chi_{q-1}, s phi> - q <chi_q, phi>|.
template <class F>
double euler_identity_residual(double q, F&& f, double support_hi,
                               const QuadOptions& opt = {}) {
  auto s_phi = [&](int k, double s) {
    return s * f(k, s) + (k > 0 ? k * f(k - 1, s) : 0.0);
  };
  const double lhs = chi_action_1d(q - 1.0, s_phi, support_hi, opt);
  const double rhs = q * chi_action_1d(q, f, support_hi, opt);
  return std::abs(lhs - rhs);
}

/// Total of g over the sphere |x| = rho in R^n (counting measure for n = 1).
template <class G>
double sphere_total(int n, double rho, G&& g, const QuadOptions& opt = {}) {
  if (n == 1) {
    const double p[1] = {rho}, m[1] = {-rho};
    return g(std::span<const double>(p, 1)) + g(std::span<const double>(m, 1));
  }
  if (n == 2) {
    return integrate_adaptive(
        [&](double th) {
          const double p[2] = {rho * std::cos(th), rho * std::sin(th)};
          return g(std::span<const double>(p, 2));
        },
        0.0, 2.0 * kPi, opt);
  }
  if (n == 3) {
    QuadOptions inner = opt;
    inner.abs_tol *= 0.25;
    return integrate_adaptive(
        [&](double th) {
          const double ct = std::cos(th), st = std::sin(th);
          return st * integrate_adaptive(
                          [&](double ph) {
                            const double p[3] = {rho * st * std::cos(ph),
                                                 rho * st * std::sin(ph), rho * ct};
                            return g(std::span<const double>(p, 3));
                          },
                          0.0, 2.0 * kPi, inner);
        },
        0.0, kPi, opt);
  }
  // general n: peel one angle, recurse on the equatorial sphere
  QuadOptions inner = opt;
  inner.abs_tol *= 0.25;
  return integrate_adaptive(
      [&](double th) {
        const double ct = std::cos(th), st = std::sin(th);
        auto g_slice = [&](std::span<const double> xs) {
          std::vector<double> p(n);
          p[0] = rho * ct;
          for (int i = 1; i < n; ++i) p[i] = xs[i - 1];
          return g(std::span<const double>(p.data(), n));
        };
        return std::pow(st, n - 2) * sphere_total(n - 1, rho * st, g_slice, inner);
      },
      0.0, kPi, opt);
}

namespace detail {

struct XtSupport {
  double rho_max;
  double t_lo, t_hi;
};

inline XtSupport xt_support(const BumpTestFunction& phi, int n) {
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::max(std::abs(phi.support_lo(i)), std::abs(phi.support_hi(i)));
    r2 += m * m;
  }
  return {std::sqrt(r2), phi.support_lo(n), phi.support_hi(n)};
}

}  // namespace detail

/// <chi_q(k(x, t-t0)), f> over R^{n+1} for q > -1 (locally integrable regime).
/// The x-integral is reduced to sphere totals; the radial integral carries the
/// (t-t0-rho)^q cone-boundary singularity through double-exponential nodes
/// (the w = sqrt(k) substitution in transform form). `phi` supplies the
/// support box of f.
template <class F>
double chi_of_k_action(double q, int n, double t0, F&& f, const BumpTestFunction& phi,
                       const QuadOptions& opt = {}) {
  if (!(q > -1.0)) throw DomainError("chi_of_k_action: requires q > -1");
  if (!(t0 > 0.0)) throw DomainError("chi_of_k_action: requires t0 > 0");
  const auto sup = detail::xt_support(phi, n);
  const double t_lo = std::max(sup.t_lo, t0);
  if (t_lo >= sup.t_hi) return 0.0;
  const double inv_gamma = 1.0 / gamma_fn(q + 1.0);
  QuadOptions inner_opt = opt;
  inner_opt.abs_tol = opt.abs_tol * 0.1;
  inner_opt.rel_tol = opt.rel_tol * 0.1;
  QuadOptions sph_opt = inner_opt;
  sph_opt.abs_tol *= 0.1;
  auto outer = [&](double t) {
    const double edge = t - t0;
    if (edge <= 0.0) return 0.0;
    const double hi = std::min(edge, sup.rho_max);
    if (hi <= 0.0) return 0.0;
    const bool singular_hi = hi == edge;
    auto g = [&](std::span<const double> x) { return f(x, t); };
    auto integrand = [&](double rho, double, double dhi) {
      double kval;
      if (singular_hi)
        kval = dhi * (edge + rho);  // (edge - rho)(edge + rho) without cancellation
      else
        kval = (edge - rho) * (edge + rho);
      return std::pow(rho, n - 1) * std::pow(kval, q) * inv_gamma *
             sphere_total(n, rho, g, sph_opt);
    };
    return tanh_sinh<double>(integrand, 0.0, hi, inner_opt);
  };
  QuadStats st;
  const double v = integrate_adaptive(outer, t_lo, sup.t_hi, opt, &st);
  if (!st.converged)
    throw ConvergenceError("chi_of_k_action: outer quadrature did not converge",
                           st.est_error);
  return v;
}

/// Relative residuals of the two Euler-Poisson-Darboux identities
///   Box chi_{j+1/2-n/2}(k) = 4 j chi_{j-1/2-n/2}(k)
///   d/dt chi_{j+1/2-n/2}(k) = 2 (t-t0) chi_{j-1/2-n/2}(k)
/// paired against phi in the locally integrable regime.
inline std::array<double, 2> epd_box_identity_residual(int j, int n, double t0,
                                                       const BumpTestFunction& phi,
                                                       const QuadOptions& opt = {}) {
  const double q_hi = j + 0.5 - 0.5 * n;
  const double q_lo = j - 0.5 - 0.5 * n;
  if (!(q_lo > -1.0))
    throw DomainError("epd_box_identity_residual: orders must stay above -1");
  std::vector<int> ord(n + 1, 0);
  auto box_phi = [&](std::span<const double> x, double t) {
    std::vector<double> pt(x.begin(), x.end());
    pt.push_back(t);
    double v = phi.second_partial(n, pt);
    for (int i = 0; i < n; ++i) v -= phi.second_partial(i, pt);
    return v;
  };
  auto phi_val = [&](std::span<const double> x, double t) {
    std::vector<double> pt(x.begin(), x.end());
    pt.push_back(t);
    return phi.value(pt);
  };
  auto phi_t = [&](std::span<const double> x, double t) {
    std::vector<double> pt(x.begin(), x.end());
    pt.push_back(t);
    std::fill(ord.begin(), ord.end(), 0);
    ord[n] = 1;
    return phi.partial(ord, pt);
  };
  auto tm_phi = [&](std::span<const double> x, double t) {
    return (t - t0) * phi_val(x, t);
  };

  const double l1 = chi_of_k_action(q_hi, n, t0, box_phi, phi, opt);
  const double r1 = 4.0 * j * chi_of_k_action(q_lo, n, t0, phi_val, phi, opt);
  const double l2 = -chi_of_k_action(q_hi, n, t0, phi_t, phi, opt);
  const double r2 = 2.0 * chi_of_k_action(q_lo, n, t0, tm_phi, phi, opt);

  auto rel = [&](double l, double r) {
    const double scale = std::max({std::abs(l), std::abs(r), phi.sup_norm() * 1e-6});
    return std::abs(l - r) / scale;
  };
  return {rel(l1, r1), rel(l2, r2)};
}

// ---------------------------------------------------------------------------
// Surface delta layers
// ---------------------------------------------------------------------------

/// u(s) = scale (s - root) on R.
struct AffineSurface1D {
  double scale = 1.0;
  double root = 0.0;
};

/// <coeff delta^{(order)}(u), f> for the affine level function, evaluated via
/// finite differences of the level-set trace (keeps the same code path the
/// curved surfaces use).
template <class C, class F>
double delta_layer_action(int order, const AffineSurface1D& s, C&& coeff, F&& f,
                          double fd_step = 1e-3) {
  if (s.scale == 0.0) throw DegeneracyError("delta_layer_action: zero gradient");
  auto trace = [&](double tau) {
    const double x = s.root + tau / s.scale;
    return coeff(x) * f(x) / std::abs(s.scale);
  };
  const double d = richardson_derivative(trace, order, fd_step, 3, 0);
  return (order % 2 == 0 ? 1.0 : -1.0) * d;
}

/// Conoid surface u(x, y) = 0, y <= b, with level function scale * u
/// (u as in the quadratic-form geometry; scale > 0 enables the
/// delta^{(q)}(a P) = a^{-(q+1)} delta^{(q)}(P) checks).
struct ConeSurface {
  int n = 1;
  SourcePoint src{-1.0, 2.0 / 3.0};
  double scale = 1.0;
};

namespace detail {

/// Level-set integral I(tau) = int_{u = tau} g dS / |grad u| for the conoid
/// family, tau <= 0 (forward sheet). dS/|grad u| collapses to
/// rho^{n-2}/18 * sphere-total along each height:
///   I(tau) = (1/18) int dy R(y)^{n-2} SphereTotal[g](R(y), y).
/// A vertex neighborhood of y-width `excision` is removed; the caller
/// extrapolates excision -> 0.
template <class G>
double cone_level_integral(const ConeSurface& surf, double tau_u, G&& g, double y_lo,
                           double excision, const QuadOptions& opt) {
  const double y_top = cone_vertex_y(surf.src, tau_u) - excision;
  if (y_top <= y_lo) return 0.0;
  QuadOptions sph = opt;
  sph.abs_tol *= 0.1;
  auto integrand = [&](double y) {
    double R;
    try {
      R = cone_radius(surf.src, y, tau_u);
    } catch (const DomainError&) {
      return 0.0;
    }
    auto gy = [&](std::span<const double> x) { return g(x, y); };
    return std::pow(R, surf.n - 2) / 18.0 * sphere_total(surf.n, R, gy, sph);
  };
  return integrate_adaptive(integrand, y_lo, y_top, opt);
}

}  // namespace detail

/// <coeff delta^{(order)}(scale u), f> on the forward conoid sheet.
/// coeff and f are called as (x-span, y). Derivatives of the level-set trace
/// are taken one-sided from the interior (tau <= 0) with Richardson
/// extrapolation; the vertex is excised and the excision extrapolated away.
template <class C, class F>
double delta_layer_action(int order, const ConeSurface& surf, C&& coeff, F&& f,
                          double y_support_lo, const QuadOptions& opt = {},
                          double excision_factor = 1e-4) {
  if (surf.scale <= 0.0) throw DomainError("delta_layer_action: scale must be > 0");
  const double eps0 = excision_factor * surf.src.a;
  auto composite = [&](std::span<const double> x, double y) { return coeff(x, y) * f(x, y); };
  auto I_u = [&](double tau_u) {
    const double i1 =
        detail::cone_level_integral(surf, tau_u, composite, y_support_lo, eps0, opt);
    const double i2 =
        detail::cone_level_integral(surf, tau_u, composite, y_support_lo, 0.5 * eps0, opt);
    return 2.0 * i2 - i1;  // excision -> 0
  };
  if (order == 0) return I_u(0.0) / surf.scale;
  const double u_scale = std::max(1.0, 9.0 * surf.src.a * surf.src.a);
  const double h0 = 1e-3 * u_scale;
  const double d = richardson_derivative([&](double t) { return I_u(t); }, order, h0, 3, -1);
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * d / std::pow(surf.scale, order + 1);
}

}  // namespace tricomi
