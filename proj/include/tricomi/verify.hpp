#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tricomi/bump.hpp"
#include "tricomi/chi.hpp"
#include "tricomi/errors.hpp"
#include "tricomi/fundsol.hpp"
#include "tricomi/geometry.hpp"
#include "tricomi/quadrature.hpp"

namespace tricomi {

/// (T phi)(x, y) = y Laplacian_x phi + phi_yy, exact bump derivatives.
inline double tricomi_apply(const BumpTestFunction& phi, std::span<const double> pt) {
  const int d = phi.dim();
  const double y = pt[d - 1];
  double lap = 0.0;
  for (int i = 0; i < d - 1; ++i) lap += phi.second_partial(i, pt);
  return y * lap + phi.second_partial(d - 1, pt);
}

/// Gradient of T phi (third-order bump partials), written into out[0..d-1].
inline void tricomi_apply_grad(const BumpTestFunction& phi, std::span<const double> pt,
                               std::span<double> out) {
  const int d = phi.dim();
  const double y = pt[d - 1];
  std::array<int, 8> ord{};
  auto part = [&](std::initializer_list<std::pair<int, int>> axes) {
    ord.fill(0);
    for (auto [axis, k] : axes) ord[axis] += k;
    return phi.partial(std::span<const int>(ord.data(), d), pt);
  };
  for (int j = 0; j < d - 1; ++j) {
    double s = 0.0;
    for (int i = 0; i < d - 1; ++i)
      s += (i == j) ? part({{i, 3}}) : part({{i, 2}, {j, 1}});
    out[j] = y * s + part({{d - 1, 2}, {j, 1}});
  }
  double lap = 0.0, lap_y = 0.0;
  for (int i = 0; i < d - 1; ++i) {
    lap += part({{i, 2}});
    lap_y += part({{i, 2}, {d - 1, 1}});
  }
  out[d - 1] = lap + y * lap_y + part({{d - 1, 3}});
}

// ---------------------------------------------------------------------------
// fixed product rules on spheres (verify hot path)
// ---------------------------------------------------------------------------

namespace detail {

inline const std::vector<std::array<double, 2>>& gl_rule_any(int n) {
  auto build = [](int m) {
    std::vector<std::array<double, 2>> rule(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * pp * pp);
      rule[i] = {-x, w};
      rule[m - 1 - i] = {x, w};
    }
    return rule;
  };
  static const std::vector<std::array<double, 2>> cache24 = build(24);
  static const std::vector<std::array<double, 2>> cache32 = build(32);
  return (n <= 24) ? cache24 : cache32;
}

/// Total of g over the sphere |x| = rho, fixed-order rule: Gauss-Legendre in
/// cos(theta) x uniform in the periodic angle.
template <class G>
double sphere_total_fixed(int n, double rho, G&& g, int order_mu = 32, int order_phi = 64) {
  if (n == 1) {
    const double p[1] = {rho}, m[1] = {-rho};
    return g(std::span<const double>(p, 1)) + g(std::span<const double>(m, 1));
  }
  if (n == 2) {
    double s = 0.0;
    const double h = 2.0 * kPi / order_phi;
    for (int j = 0; j < order_phi; ++j) {
      const double p[2] = {rho * std::cos(j * h), rho * std::sin(j * h)};
      s += g(std::span<const double>(p, 2));
    }
    return s * h;
  }
  if (n == 3) {
    const auto& mu_rule = gl_rule_any(order_mu);
    const double h = 2.0 * kPi / order_phi;
    double s = 0.0;
    for (const auto& [mu, wmu] : mu_rule) {
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      double ring = 0.0;
      for (int j = 0; j < order_phi; ++j) {
        const double p[3] = {rho * st * std::cos(j * h), rho * st * std::sin(j * h),
                             rho * mu};
        ring += g(std::span<const double>(p, 3));
      }
      s += wmu * ring * h;
    }
    return s;
  }
  return sphere_total(n, rho, std::forward<G>(g));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// weak-form verification
// ---------------------------------------------------------------------------

enum class KernelId { EMinus, EPlus, Etilde, FMinus, FPlus };

inline const char* to_string(KernelId k) {
  switch (k) {
    case KernelId::EMinus: return "Eminus";
    case KernelId::EPlus: return "Eplus";
    case KernelId::Etilde: return "Etilde";
    case KernelId::FMinus: return "Fminus";
    case KernelId::FPlus: return "Fplus";
  }
  return "?";
}

struct QuadConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int max_panels = 2000;
  double excision_factor = 1e-4;    // x t0, conoid vertex excision
  bool boundary_substitution = true;
  double target_tol = 1e-3;         // PASS iff residual <= target_tol * sup|phi|
  int sphere_order_mu = 24;
  int sphere_order_phi = 48;
};

struct VerifyReport {
  std::string kernel;
  int n = 0;
  double b = 0.0;  // NaN-free; 0 for the origin kernels
  double target = 0.0;
  Complex volume{0.0, 0.0};
  std::vector<double> layer_values;
  Complex total{0.0, 0.0};
  double residual = 0.0;       // |Re total - target|
  double imag_residual = 0.0;  // |Im total|
  double est_error = 0.0;
  long evals = 0;
  double wall_ms = 0.0;
  bool passed = false;

  std::string to_kv() const {
    std::ostringstream os;
    os.precision(17);
    os << "kernel=" << kernel << " n=" << n << " b=" << b << " target=" << target
       << " volume_re=" << volume.real() << " volume_im=" << volume.imag();
    os << " layers=";
    for (std::size_t i = 0; i < layer_values.size(); ++i)
      os << (i ? "," : "") << layer_values[i];
    if (layer_values.empty()) os << "none";
    os << " total_re=" << total.real() << " total_im=" << total.imag()
       << " residual=" << residual << " imag_residual=" << imag_residual
       << " est_error=" << est_error << " evals=" << evals << " wall_ms=" << wall_ms
       << " status=" << (passed ? "PASS" : "FAILED");
    return os.str();
  }

  static std::string csv_header() {
    return "kernel,n,b,target,total_re,total_im,residual,imag_residual,est_error,"
           "evals,wall_ms,status";
  }
  std::string csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << kernel << ',' << n << ',' << b << ',' << target << ',' << total.real() << ','
       << total.imag() << ',' << residual << ',' << imag_residual << ',' << est_error
       << ',' << evals << ',' << wall_ms << ',' << (passed ? "PASS" : "FAILED");
    return os.str();
  }
};

namespace detail {

struct XReach {
  double lo = 0.0, hi = 0.0;
};

inline XReach x_reach(const BumpTestFunction& phi, int n) {
  XReach r;
  double lo2 = 0.0, hi2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = phi.support_lo(i), b = phi.support_hi(i);
    const double m = std::max(std::abs(a), std::abs(b));
    hi2 += m * m;
    if (a > 0.0)
      lo2 += a * a;
    else if (b < 0.0)
      lo2 += b * b;
  }
  r.lo = std::sqrt(lo2);
  r.hi = std::sqrt(hi2);
  return r;
}

enum class EdgeKind { None, ConeU, CharV, Cusp };

struct RhoPanel {
  double lo = 0.0, hi = 0.0;
  EdgeKind lo_kind = EdgeKind::None, hi_kind = EdgeKind::None;
};

}  // namespace detail

/// Weak-form certificate: quadrature of <kernel, T phi> (volume term plus, for
/// odd n, the conoid delta layers) compared against phi at the source point.
/// E-type kernels use the source (0, b); F-type kernels the origin. For the
/// branched kernels the real part carries the delta and the imaginary part
/// must vanish.
inline VerifyReport weak_form_residual(KernelId id, int n, double b, Branch br,
                                       const BumpTestFunction& phi,
                                       const QuadConfig& cfg = {}) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  if (phi.dim() != n + 1) throw DomainError("weak_form_residual: phi dimension mismatch");
  if ((id == KernelId::EPlus || id == KernelId::Etilde) && n != 1)
    throw DomainError("weak_form_residual: E+ and E~ are n = 1 kernels");
  if (id == KernelId::FMinus && parity_of(n) == Parity::Odd && n > 3)
    throw DomainError("weak_form_residual: F- weak form not supported for odd n > 3");

  VerifyReport rep;
  rep.kernel = to_string(id);
  rep.n = n;
  const bool f_kernel = (id == KernelId::FMinus || id == KernelId::FPlus);
  rep.b = f_kernel ? 0.0 : b;

  const KernelSpec spec =
      f_kernel ? KernelSpec{n, parity_of(n), SourcePoint{-1.0, 2.0 / 3.0}, br, 0}
               : make_kernel_spec(n, b, br);
  const SourcePoint src = spec.source;

  // target phi(0, b) resp. phi(0, 0); E~ is a null solution (target 0)
  {
    std::vector<double> p0(n + 1, 0.0);
    p0[n] = rep.b;
    rep.target = (id == KernelId::Etilde) ? 0.0 : phi.value(p0);
  }

  const double sup = phi.sup_norm();
  QuadOptions outer_opt;
  outer_opt.abs_tol = std::max(cfg.abs_tol, 0.02 * cfg.target_tol * sup);
  outer_opt.rel_tol = cfg.rel_tol;
  outer_opt.max_panels = cfg.max_panels;
  QuadOptions inner_opt = outer_opt;
  inner_opt.abs_tol *= 0.05;
  inner_opt.max_level = 10;

  const auto reach = detail::x_reach(phi, n);
  const double y_lo_sup = phi.support_lo(n), y_hi_sup = phi.support_hi(n);
  long evals = 0;
  double est_err = 0.0;

  auto tphi_total = [&](double rho, double y) {
    std::vector<double> pt(n + 1);
    pt[n] = y;
    auto g = [&](std::span<const double> x) {
      for (int i = 0; i < n; ++i) pt[i] = x[i];
      ++evals;
      return tricomi_apply(phi, pt);
    };
    return detail::sphere_total_fixed(n, rho, g, cfg.sphere_order_mu, cfg.sphere_order_phi);
  };

  // panels of the radial integral at height y, with edge metadata
  auto panels_at = [&](double y) {
    std::vector<detail::RhoPanel> ps;
    auto push = [&](double lo, double hi, detail::EdgeKind kl, detail::EdgeKind kh) {
      if (hi - lo > 1e-14 * std::max(1.0, hi)) ps.push_back({lo, hi, kl, kh});
    };
    const double rmax = reach.hi;
    switch (id) {
      case KernelId::EMinus: {
        if (y >= src.b) break;
        double ru;
        try {
          ru = cone_radius(src, y);
        } catch (const DomainError&) {
          break;
        }
        if (ru <= rmax)
          push(0.0, ru, detail::EdgeKind::None, detail::EdgeKind::ConeU);
        else
          push(0.0, rmax, detail::EdgeKind::None, detail::EdgeKind::None);
        break;
      }
      case KernelId::EPlus:
      case KernelId::Etilde: {
        if (y > 0.0) {
          // elliptic half-plane: split at |x| = a where the y -> 0 peak sits
          push(0.0, std::min(src.a, rmax), detail::EdgeKind::None, detail::EdgeKind::None);
          push(std::min(src.a, rmax), rmax, detail::EdgeKind::None, detail::EdgeKind::None);
          break;
        }
        const double rv = characteristic_radius(src, y);
        double ru = -1.0;
        if (y < src.b) {
          try {
            ru = cone_radius(src, y);
          } catch (const DomainError&) {
            ru = -1.0;
          }
        }
        const bool cone_edge = ru > 0.0 && ru <= rmax;
        if (id == KernelId::Etilde && cone_edge)
          push(0.0, ru, detail::EdgeKind::None, detail::EdgeKind::ConeU);
        const double start = (ru > 0.0) ? std::min(ru, rmax) : 0.0;
        const auto start_kind = cone_edge ? detail::EdgeKind::ConeU : detail::EdgeKind::None;
        if (rv <= rmax) {
          push(start, rv, start_kind, detail::EdgeKind::CharV);
          push(rv, rmax, detail::EdgeKind::CharV, detail::EdgeKind::None);
        } else {
          push(start, rmax, start_kind, detail::EdgeKind::None);
        }
        break;
      }
      case KernelId::FMinus: {
        if (y >= 0.0) break;
        const double rc = cusp_radius(y);
        if (rc <= rmax)
          push(0.0, rc, detail::EdgeKind::None, detail::EdgeKind::Cusp);
        else
          push(0.0, rmax, detail::EdgeKind::None, detail::EdgeKind::None);
        break;
      }
      case KernelId::FPlus: {
        if (y < 0.0) {
          const double rc = cusp_radius(y);
          if (rc >= rmax) break;
          push(std::max(rc, 0.0), rmax, detail::EdgeKind::Cusp, detail::EdgeKind::None);
        } else {
          push(0.0, rmax, detail::EdgeKind::None, detail::EdgeKind::None);
        }
        break;
      }
    }
    return ps;
  };

  // density of the kernel at (rho, y) with cancellation-free edge quantities:
  // u (resp. v) is rebuilt from the exact distance whenever a panel edge sits
  // on its zero curve, e.g. u = 9(rho - rho_u)(rho + rho_u).
  auto density = [&](double y, const detail::RhoPanel& p, double rho, double dlo,
                     double dhi) -> Complex {
    auto stable_uv = [&]() {
      auto [u, v] = uv_radial(rho * rho, y, src.a);
      const double spread = 24.0 * src.a * std::pow(-y, 1.5);
      if (p.hi_kind == detail::EdgeKind::ConeU) u = -9.0 * dhi * (rho + p.hi);
      if (p.lo_kind == detail::EdgeKind::ConeU) u = 9.0 * dlo * (rho + p.lo);
      if (p.hi_kind == detail::EdgeKind::CharV)
        v = -9.0 * dhi * (rho + p.hi);
      else if (p.lo_kind == detail::EdgeKind::CharV)
        v = 9.0 * dlo * (rho + p.lo);
      else
        v = u - spread;
      return std::pair<double, double>{u, v};
    };
    switch (id) {
      case KernelId::EMinus: {
        auto [u, v] = stable_uv();
        if (u >= 0.0) return 0.0;
        return Complex(eval_E_minus_from_uv(spec, u, v));
      }
      case KernelId::EPlus:
      case KernelId::Etilde: {
        const double sgn = (id == KernelId::EPlus) ? -1.0 : 1.0;
        if (y > 0.0) return sgn * eval_tilde_E_radial(rho, y, src, br).value;
        auto [u, v] = stable_uv();
        return sgn * eval_tilde_E_from_uv(u, v, br);
      }
      case KernelId::FMinus: {
        double w;
        if (p.hi_kind == detail::EdgeKind::Cusp)
          w = -9.0 * dhi * (rho + p.hi);
        else
          w = 9.0 * rho * rho + 4.0 * y * y * y;
        if (w >= 0.0) return 0.0;
        return Complex(constants(n).C_minus * std::pow(-w, 1.0 / 3.0 - 0.5 * n));
      }
      case KernelId::FPlus: {
        double w;
        if (p.lo_kind == detail::EdgeKind::Cusp)
          w = 9.0 * dlo * (rho + p.lo);
        else
          w = 9.0 * rho * rho + 4.0 * y * y * y;
        if (w <= 0.0) return 0.0;
        double cplus;
        if (n == 1)
          cplus = -gauss_at_one({1.0 / 6.0, 1.0 / 6.0, 1.0}) /
                  (std::pow(2.0, 1.0 / 3.0) * std::sqrt(3.0));
        else
          cplus = constants(n).C_plus;
        return Complex(cplus * std::pow(w, 1.0 / 3.0 - 0.5 * n));
      }
    }
    return 0.0;
  };

  const bool fminus_ibp = (id == KernelId::FMinus && n == 3);

  auto inner_integral = [&](double y) -> Complex {
    Complex acc = 0.0;
    for (const auto& p : panels_at(y)) {
      acc += tanh_sinh<Complex>(
          [&](double rho, double dlo, double dhi) -> Complex {
            const Complex d = density(y, p, rho, dlo, dhi);
            if (d == Complex(0.0)) return 0.0;
            return std::pow(rho, n - 1) * d * tphi_total(rho, y);
          },
          p.lo, p.hi, inner_opt);
    }
    return acc;
  };

  // outer y-range per kernel with breakpoints at b and 0
  double y_lo = y_lo_sup, y_hi = y_hi_sup;
  if (id == KernelId::EMinus) y_hi = std::min(y_hi, src.b);
  if (id == KernelId::FMinus) y_hi = std::min(y_hi, 0.0);
  std::vector<double> breaks{y_lo, y_hi};
  for (double c : {src.b, 0.0})
    if (c > y_lo && c < y_hi && !f_kernel) breaks.push_back(c);
  if (f_kernel && 0.0 > y_lo && 0.0 < y_hi) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());

  Complex volume = 0.0;
  if (y_hi > y_lo && !fminus_ibp) {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      QuadStats st;
      volume += integrate_adaptive(inner_integral, breaks[i], breaks[i + 1], outer_opt, &st);
      est_err += st.est_error;
    }
  }

  if (fminus_ibp) {
    // F_-(n=3) is not locally integrable ((-w)^{-7/6}); one integration by
    // parts lowers the pairing into the integrable range:
    //   <F_-, psi> = -C_- Gamma(e+1)/Gamma(e+2) int w_+^{e+1} div(psi grad w / |grad w|^2)
    // with w = -(9|x|^2 + 4y^3), e = -7/6, psi = T phi.
    const double cminus = constants(n).C_minus;
    const double e = 1.0 / 3.0 - 0.5 * n;  // -7/6
    const double front = -cminus * gamma_fn(e + 1.0) / gamma_fn(e + 2.0);
    std::vector<double> pt(n + 1), grad(n + 1);
    auto G = [&](std::span<const double> x, double y) {
      for (int i = 0; i < n; ++i) pt[i] = x[i];
      pt[n] = y;
      ++evals;
      const double psi = tricomi_apply(phi, pt);
      tricomi_apply_grad(phi, pt, grad);
      double rho2 = 0.0, dot = 0.0;
      for (int i = 0; i < n; ++i) {
        rho2 += x[i] * x[i];
        dot += grad[i] * (-18.0 * x[i]);
      }
      dot += grad[n] * (-12.0 * y * y);
      const double g2 = 324.0 * rho2 + 144.0 * std::pow(y, 4);
      const double lapw = -18.0 * n - 24.0 * y;
      const double gdot = -11664.0 * rho2 - 6912.0 * std::pow(y, 5);
      return dot / g2 + psi * (lapw / g2 - gdot / (g2 * g2));
    };
    auto inner = [&](double y) -> double {
      const double rc = cusp_radius(y);
      const double hi = std::min(rc, reach.hi);
      if (hi <= 0.0) return 0.0;
      const bool cusp_edge = hi == rc;
      return tanh_sinh<double>(
          [&](double rho, double, double dhi) {
            double w = cusp_edge ? 9.0 * dhi * (rho + hi)
                                 : -(9.0 * rho * rho + 4.0 * y * y * y);
            if (w <= 0.0) return 0.0;
            auto gy = [&](std::span<const double> x) { return G(x, y); };
            return std::pow(rho, n - 1) * std::pow(w, e + 1.0) *
                   detail::sphere_total_fixed(n, rho, gy, cfg.sphere_order_mu,
                                              cfg.sphere_order_phi);
          },
          0.0, hi, inner_opt);
    };
    const double top = std::min(y_hi_sup, -1e-12);
    if (top > y_lo_sup) {
      QuadStats st;
      volume = front * integrate_adaptive(inner, y_lo_sup, top, outer_opt, &st);
      est_err += st.est_error;
    }
  }

  rep.volume = volume;
  Complex total = volume;

  // odd-n conoid layers for E_-
  if (id == KernelId::EMinus && spec.parity == Parity::Odd) {
    std::vector<double> pt(n + 1);
    auto f = [&](std::span<const double> x, double y) {
      for (int i = 0; i < n; ++i) pt[i] = x[i];
      pt[n] = y;
      ++evals;
      return tricomi_apply(phi, pt);
    };
    QuadOptions layer_opt = outer_opt;
    layer_opt.abs_tol *= 0.2;
    for (const auto& term : singular_layers(spec)) {
      auto coeff = [&](std::span<const double>, double y) { return term.coefficient_at(y); };
      const double v = term.level_normalization *
                       delta_layer_action(term.order, ConeSurface{n, src, 1.0}, coeff, f,
                                          y_lo_sup, layer_opt, cfg.excision_factor);
      rep.layer_values.push_back(v);
      total += v;
    }
  }

  rep.total = total;
  rep.residual = std::abs(total.real() - rep.target);
  rep.imag_residual = std::abs(total.imag());
  rep.est_error = est_err;
  rep.evals = evals;
  const double tol = cfg.target_tol * std::max(sup, 1e-30);
  rep.passed = rep.residual <= tol && rep.imag_residual <= tol;
  rep.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t_start).count();
  return rep;
}

/// Green bilinear residual int (phi T psi - psi T phi) over the plane (n = 1):
/// vanishes by the divergence form of the operator.
inline double green_bilinear_residual(const BumpTestFunction& phi,
                                      const BumpTestFunction& psi,
                                      const QuadOptions& opt = {}) {
  const double xlo = std::min(phi.support_lo(0), psi.support_lo(0));
  const double xhi = std::max(phi.support_hi(0), psi.support_hi(0));
  const double ylo = std::min(phi.support_lo(1), psi.support_lo(1));
  const double yhi = std::max(phi.support_hi(1), psi.support_hi(1));
  QuadOptions inner = opt;
  inner.abs_tol *= 0.1;
  return integrate_adaptive(
      [&](double y) {
        return integrate_adaptive(
            [&](double x) {
              const double pt[2] = {x, y};
              return phi.value(pt) * tricomi_apply(psi, pt) -
                     psi.value(pt) * tricomi_apply(phi, pt);
            },
            xlo, xhi, inner);
      },
      ylo, yhi, opt);
}

/// Pointwise gap |E_-(rho, y; b) - F_-(rho, y)| along a sequence b -> 0^-.
struct LimitCheckRow {
  double rho = 0.0, y = 0.0;
  std::vector<double> gaps;
  bool monotone = false;
  bool skipped = false;
};

inline std::vector<LimitCheckRow> limit_check(int n,
                                              const std::vector<std::array<double, 2>>& points,
                                              const std::vector<double>& b_sequence) {
  std::vector<LimitCheckRow> rows;
  for (const auto& [rho, y] : points) {
    LimitCheckRow row;
    row.rho = rho;
    row.y = y;
    const double fm = eval_F_minus_radial(n, rho, y);
    if (!(9.0 * rho * rho + 4.0 * y * y * y < 0.0)) {
      row.skipped = true;  // not interior to D_-^n
      rows.push_back(row);
      continue;
    }
    bool ok = true;
    for (double b : b_sequence) {
      const KernelSpec s = make_kernel_spec(n, b);
      if (classify_radial(rho * rho, y, s.source) != RegionTag::DMinusInterior) {
        ok = false;
        break;
      }
      row.gaps.push_back(std::abs(eval_E_minus_radial(s, rho, y) - fm));
    }
    if (!ok) {
      row.skipped = true;
      rows.push_back(row);
      continue;
    }
    row.monotone = true;
    for (std::size_t i = 0; i + 1 < row.gaps.size(); ++i)
      if (!(row.gaps[i + 1] < row.gaps[i])) row.monotone = false;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tricomi
