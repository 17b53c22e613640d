#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tricomi/errors.hpp"

namespace tricomi {

/// The 1-D mollifier kernel psi(s) = exp(-1/(1-s^2)) on |s| < 1, 0 outside.
/// Derivatives are exact through the rational-prefactor recurrence
///   psi^(k)(s) = P_k(s) / (1-s^2)^{2k} * psi(s),
///   P_0 = 1,  P_{k+1} = (1-s^2)^2 P_k' + (4 k s (1-s^2) - 2 s) P_k,
/// with the polynomial tables built once at static-init time.
class BumpKernel {
 public:
  static constexpr int kMaxOrder = 10;

  static double value(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
  }

  static double derivative(int k, double s) {
    if (k == 0) return value(s);
    if (k < 0 || k > kMaxOrder) throw DomainError("BumpKernel: derivative order out of range");
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    const double e = std::exp(-1.0 / q);
    if (e == 0.0) return 0.0;
    return horner(tables()[k], s) * e / std::pow(q, 2.0 * k);
  }

 private:
  static double horner(const std::vector<double>& poly, double s) {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) v = v * s + poly[i];
    return v;
  }

  static const std::vector<std::vector<double>>& tables() {
    static const std::vector<std::vector<double>> t = [] {
      std::vector<std::vector<double>> ps(kMaxOrder + 1);
      ps[0] = {1.0};
      for (int k = 0; k < kMaxOrder; ++k) {
        const auto& p = ps[k];
        const int deg = (int)p.size() - 1;
        std::vector<double> next(deg + 4, 0.0);
        // (1-s^2)^2 P' = P' - 2 s^2 P' + s^4 P'
        for (int i = 1; i <= deg; ++i) {
          const double d = i * p[i];  // coefficient of s^{i-1} in P'
          next[i - 1] += d;
          next[i + 1] -= 2.0 * d;
          next[i + 3] += d;
        }
        // (4 k s (1-s^2) - 2 s) P = (4k - 2) s P - 4 k s^3 P
        for (int i = 0; i <= deg; ++i) {
          next[i + 1] += (4.0 * k - 2.0) * p[i];
          next[i + 3] -= 4.0 * k * p[i];
        }
        while (next.size() > 1 && next.back() == 0.0) next.pop_back();
        ps[k + 1] = std::move(next);
      }
      return ps;
    }();
    return t;
  }
};

/// Compactly supported smooth test function: a product of 1-D kernels, one per
/// coordinate, centered at `center` with half-width `radius`. Support is the
/// closed cube prod_i [center_i - radius, center_i + radius] (contained in the
/// ball of radius sqrt(dim) x radius). All partial derivatives are exact.
class BumpTestFunction {
 public:
  BumpTestFunction(std::vector<double> center, double radius, double amplitude = 1.0)
      : center_(std::move(center)), radius_(radius), amplitude_(amplitude) {
    if (radius_ <= 0.0) throw DomainError("BumpTestFunction: radius must be positive");
  }

  int dim() const { return (int)center_.size(); }
  double radius() const { return radius_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& center() const { return center_; }

  double value(std::span<const double> pt) const {
    double v = amplitude_;
    for (int i = 0; i < dim(); ++i) {
      v *= BumpKernel::value((pt[i] - center_[i]) / radius_);
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  /// Mixed partial derivative with per-coordinate orders.
  double partial(std::span<const int> orders, std::span<const double> pt) const {
    double v = amplitude_;
    for (int i = 0; i < dim(); ++i) {
      const double s = (pt[i] - center_[i]) / radius_;
      v *= BumpKernel::derivative(orders[i], s) / std::pow(radius_, orders[i]);
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  /// Second partial in coordinate i.
  double second_partial(int i, std::span<const double> pt) const {
    double v = amplitude_;
    for (int j = 0; j < dim(); ++j) {
      const double s = (pt[j] - center_[j]) / radius_;
      const double f = (j == i) ? BumpKernel::derivative(2, s) / (radius_ * radius_)
                                : BumpKernel::value(s);
      v *= f;
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  bool in_support(std::span<const double> pt) const {
    for (int i = 0; i < dim(); ++i)
      if (std::abs(pt[i] - center_[i]) >= radius_) return false;
    return true;
  }

  double support_lo(int i) const { return center_[i] - radius_; }
  double support_hi(int i) const { return center_[i] + radius_; }

  /// max |phi| = amplitude * e^{-dim}, attained at the center.
  double sup_norm() const { return std::abs(amplitude_) * std::exp(-(double)dim()); }

  /// 1-D convenience (dim() == 1): k-th derivative at s.
  double derivative1d(int k, double s) const {
    const double u = (s - center_[0]) / radius_;
    return amplitude_ * BumpKernel::derivative(k, u) / std::pow(radius_, k);
  }

 private:
  std::vector<double> center_;
  double radius_;
  double amplitude_;
};

}  // namespace tricomi
