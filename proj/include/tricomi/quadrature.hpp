#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "tricomi/errors.hpp"
#include "tricomi/special.hpp"

namespace tricomi {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_panels = 4000;   // global adaptive budget
  int max_level = 12;      // tanh-sinh halvings
};

struct QuadStats {
  long evals = 0;
  double est_error = 0.0;
  bool converged = true;
};

namespace detail {

/// Gauss-Legendre rule on [-1,1] by Newton iteration on P_n. Cached per order.
inline const std::vector<std::array<double, 2>>& gl_rule(int n) {
  auto build = [](int m) {
    std::vector<std::array<double, 2>> rule(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = m * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double w = 2.0 / ((1.0 - x * x) * pp * pp);
      rule[i] = {-x, w};
      rule[m - 1 - i] = {x, w};
    }
    return rule;
  };
  static const std::vector<std::array<double, 2>> r15 = build(15);
  static const std::vector<std::array<double, 2>> r31 = build(31);
  static const std::vector<std::array<double, 2>> r8 = build(8);
  switch (n) {
    case 8: return r8;
    case 15: return r15;
    default: return r31;
  }
}

}  // namespace detail

template <class F>
auto fixed_gl(F&& f, double a, double b, int n) {
  using T = decltype(f(0.5 * (a + b)));
  const auto& rule = detail::gl_rule(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  T s{};
  for (const auto& [x, w] : rule) s += w * f(mid + half * x);
  return T(half * s);
}

/// Globally adaptive quadrature; refines the worst panel (GL15 vs GL31
/// difference) until the summed error estimate meets tolerance.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadOptions& opt = {},
                        QuadStats* stats = nullptr) {
  using T = decltype(f(0.5 * (a + b)));
  struct Panel {
    double lo, hi, err;
    T val;
  };
  if (stats) *stats = QuadStats{};
  if (!(b > a)) {
    if (a == b) return T{};
    auto r = integrate_adaptive(std::forward<F>(f), b, a, opt, stats);
    return T(-r);
  }
  long evals = 0;
  auto eval_panel = [&](double lo, double hi) {
    T coarse = fixed_gl(f, lo, hi, 15);
    T fine = fixed_gl(f, lo, hi, 31);
    evals += 46;
    return Panel{lo, hi, std::abs(fine - coarse), fine};
  };
  std::vector<Panel> panels;
  panels.push_back(eval_panel(a, b));
  auto worst = [&] {
    std::size_t k = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[k].err) k = i;
    return k;
  };
  T total = panels[0].val;
  double err = panels[0].err;
  while ((int)panels.size() < opt.max_panels) {
    if (err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) break;
    std::size_t k = worst();
    Panel p = panels[k];
    if (p.hi - p.lo < 1e-15 * (b - a)) break;  // cannot refine further
    double mid = 0.5 * (p.lo + p.hi);
    Panel left = eval_panel(p.lo, mid);
    Panel right = eval_panel(mid, p.hi);
    panels[k] = left;
    panels.push_back(right);
    total = T{};
    err = 0.0;
    for (const auto& q : panels) {
      total += q.val;
      err += q.err;
    }
  }
  if (stats) {
    stats->evals = evals;
    stats->est_error = err;
    stats->converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 4.0;
  }
  return total;
}

/// tanh-sinh (double exponential) quadrature on (a, b). The integrand is
/// called as f(x, dlo, dhi) with dlo = x-a and dhi = b-x computed without
/// cancellation, so endpoint-singular factors can be formed stably.
template <class T = double, class F>
T tanh_sinh(F&& f, double a, double b, const QuadOptions& opt = {},
            QuadStats* stats = nullptr) {
  if (stats) *stats = QuadStats{};
  if (!(b > a)) {
    if (a == b) return T{};
    T r = tanh_sinh<T>(std::forward<F>(f), b, a, opt, stats);
    return T(-r);
  }
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  (void)mid;
  // Large enough that for any integrable endpoint power d^p, p > -1, the
  // truncated tail is below double precision before the weights underflow.
  const double u_max = 6.0;
  long evals = 0;
  auto point_term = [&](double u) -> T {
    const double g = 0.5 * kPi * std::sinh(u);
    const double c = std::cosh(g);
    const double w = 0.5 * kPi * std::cosh(u) / (c * c);
    const double e2g = std::exp(-2.0 * std::abs(g));
    double dnear = 2.0 * half * e2g / (1.0 + e2g);      // distance to nearest end
    double dfar = 2.0 * half / (1.0 + e2g);             // distance to far end
    if (w == 0.0 || dnear <= 0.0) return T{};
    double x, dlo, dhi;
    if (u >= 0) {
      dhi = dnear;
      dlo = dfar;
      x = b - dhi;
    } else {
      dlo = dnear;
      dhi = dfar;
      x = a + dlo;
    }
    ++evals;
    return T(w * f(x, dlo, dhi));
  };
  // level 0, h = 1
  double h = 1.0;
  T sum = point_term(0.0);
  for (int k = 1; k * h <= u_max; ++k) sum += point_term(k * h) + point_term(-k * h);
  T best = T(half * h * sum);
  double est = std::abs(best);
  bool converged = false;
  for (int level = 1; level <= opt.max_level; ++level) {
    h *= 0.5;
    for (double u = h; u <= u_max; u += 2.0 * h) sum += point_term(u) + point_term(-u);
    T cur = T(half * h * sum);
    est = std::abs(cur - best);
    best = cur;
    if (level >= 3 && est <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
      converged = true;
      break;
    }
  }
  if (stats) {
    stats->evals = evals;
    stats->est_error = est;
    stats->converged = converged || est <= 10.0 * std::max(opt.abs_tol, opt.rel_tol * std::abs(best));
  }
  return best;
}

/// q-th derivative at 0 of a 1-D functional by finite differences with
/// Richardson extrapolation. side = 0 central, -1 uses only arguments <= 0.
inline double richardson_derivative(const std::function<double(double)>& fn, int q,
                                    double h0, int levels = 3, int side = 0) {
  if (q == 0) return fn(0.0);
  auto stencil = [&](double h) -> double {
    if (side == 0) {
      switch (q) {
        case 1: return (fn(h) - fn(-h)) / (2.0 * h);
        case 2: return (fn(h) - 2.0 * fn(0.0) + fn(-h)) / (h * h);
        case 3: return (fn(2 * h) - 2.0 * fn(h) + 2.0 * fn(-h) - fn(-2 * h)) / (2.0 * h * h * h);
        default: throw DomainError("richardson_derivative: order > 3 unsupported");
      }
    }
    // one-sided (arguments of sign `side` only), 2nd-order stencils
    const double s = side;
    switch (q) {
      case 1:
        return s * (3.0 * fn(0.0) - 4.0 * fn(s * h) + fn(s * 2 * h)) / (2.0 * h);
      case 2:
        return (2.0 * fn(0.0) - 5.0 * fn(s * h) + 4.0 * fn(s * 2 * h) - fn(s * 3 * h)) / (h * h);
      case 3:
        return s * (-5.0 * fn(0.0) + 18.0 * fn(s * h) - 24.0 * fn(s * 2 * h) +
                    14.0 * fn(s * 3 * h) - 3.0 * fn(s * 4 * h)) / (2.0 * h * h * h);
      default: throw DomainError("richardson_derivative: order > 3 unsupported");
    }
  };
  // Richardson on the 2nd-order stencils: error = c1 h^2 + c2 h^4 + ...
  std::vector<double> row(levels);
  for (int i = 0; i < levels; ++i) row[i] = stencil(h0 / std::pow(2.0, i));
  for (int j = 1; j < levels; ++j) {
    const double f4 = std::pow(4.0, j);
    for (int i = levels - 1; i >= j; --i) row[i] = (f4 * row[i] - row[i - 1]) / (f4 - 1.0);
  }
  return row[levels - 1];
}

}  // namespace tricomi
