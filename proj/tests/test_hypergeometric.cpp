#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "tricomi/hypergeometric.hpp"

using namespace tricomi;
using Catch::Approx;

namespace {
const HypTriple kSixth{1.0 / 6.0, 1.0 / 6.0, 1.0};

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

TEST_CASE("series special values") {
  CHECK(hyp2f1_series({0.9, 1.3, 2.2}, 0.0).real() == 1.0);
  // F(1,1,2;z) = -log(1-z)/z
  const Complex v = hyp2f1_series({1.0, 1.0, 2.0}, 0.5);
  CHECK(v.real() == Approx(2.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(v.real() == Approx(1.38629436111989062).epsilon(1e-13));
  // terminating polynomial: F(-2, b, c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
  const double b = 0.7, c = 1.9, z = 3.7;
  const double poly = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
  CHECK(hyp2f1_series({-2.0, b, c}, z).real() == Approx(poly).epsilon(1e-13));
}

TEST_CASE("series truncation cap") {
  CHECK_THROWS_AS(hyp2f1_series(kSixth, Complex(0.9999999, 0.0)), ConvergenceError);
}

TEST_CASE("gauss summation") {
  const double g = gauss_at_one(kSixth);
  CHECK(g == Approx(gamma_fn(2.0 / 3.0) / std::pow(gamma_fn(5.0 / 6.0), 2)).epsilon(1e-13));
  CHECK(g == Approx(1.0627533202790793).epsilon(1e-13));
  CHECK(gauss_at_one({0.0, 0.4, 1.1}) == Approx(1.0).epsilon(1e-14));
  // Gamma(11/6) = (5/6) Gamma(5/6)
  CHECK(gauss_at_one({1.0 / 6.0, 7.0 / 6.0, 2.0}) ==
        Approx(1.2 * gamma_fn(2.0 / 3.0) / std::pow(gamma_fn(5.0 / 6.0), 2)).epsilon(1e-13));
  CHECK(gauss_at_one({1.0 / 6.0, 7.0 / 6.0, 2.0}) == Approx(1.27530398433489516).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_at_one({1.0, 1.0, 1.5}), DomainError);
}

TEST_CASE("pfaff transform examples") {
  CHECK(pfaff_transform({0.9, 0.4, 1.7}, 0.0).value.real() == 1.0);
  // F(5/6,1/6,1;1/2) = 2^{1/6} F(1/6,1/6,1;-1)
  const Complex lhs = pfaff_transform({5.0 / 6.0, 1.0 / 6.0, 1.0}, 0.5).value;
  const Complex rhs = std::pow(2.0, 1.0 / 6.0) * hyp2f1(kSixth, Complex(-1.0, 0.0)).value;
  CHECK(rel_diff(lhs, rhs) < 1e-12);
  CHECK(lhs.real() == Approx(1.09843069683986207).epsilon(1e-13));
  CHECK_THROWS_AS(pfaff_transform(kSixth, Complex(1.0, 0.0)), DomainError);
}

TEST_CASE("pfaff agrees with logarithmic continuation at z = -3") {
  // z/(z-1) = 0.75 makes the Pfaff side a plain series; the dispatcher routes
  // z = -3 through the a = b logarithmic form.
  const Complex via_pfaff = pfaff_transform(kSixth, -3.0).value;
  const Complex via_log = hyp2f1(kSixth, Complex(-3.0, 0.0)).value;
  CHECK(rel_diff(via_pfaff, via_log) < 1e-10);
  CHECK(via_log.real() == Approx(0.952874803267933878).epsilon(1e-12));
}

TEST_CASE("derivative identity") {
  CHECK(hyp2f1_derivative(kSixth, 0.0).value.real() == Approx(1.0 / 36.0).epsilon(1e-14));
  for (const auto& [p, z] : {std::pair<HypTriple, double>{{1.0, 1.0, 2.0}, 0.5},
                             {kSixth, 0.5}, {kSixth, 0.3}}) {
    auto f = [&](double h) { return hyp2f1(p, Complex(z + h, 0.0)).value.real(); };
    const double fd = richardson_derivative(f, 1, 1e-3, 3, 0);
    CHECK(hyp2f1_derivative(p, Complex(z, 0.0)).value.real() == Approx(fd).margin(1e-8));
  }
}

TEST_CASE("euler integral oracle") {
  CHECK(std::abs(hyp2f1_oracle({1.0, 1.0, 2.0}, 0.5) - Complex(1.38629436111989062)) < 1e-11);
  CHECK(std::abs(hyp2f1_oracle({0.3, 0.8, 1.9}, 0.0) - Complex(1.0)) < 1e-12);
  CHECK(rel_diff(hyp2f1_oracle(kSixth, -1.0), hyp2f1(kSixth, Complex(-1.0, 0.0)).value) < 1e-10);
  CHECK_THROWS_AS(hyp2f1_oracle({0.5, -0.2, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(hyp2f1_oracle(kSixth, Complex(2.0, 0.0)), DomainError);
}

TEST_CASE("series, Pfaff and oracle agree on the randomized sweep") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> par(0.05, 3.0);
  std::uniform_real_distribution<double> arg(-0.9, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    double a = par(rng), b = par(rng), c = par(rng);
    if (c <= b) std::swap(b, c);
    if (c <= b) continue;
    if (c - b < 0.05 || b < 0.05) continue;
    const HypTriple p{a, b, c};
    const double z = arg(rng);
    const Complex s = hyp2f1_series(p, z);
    const Complex pf = pfaff_transform(p, z).value;
    const Complex orc = hyp2f1_oracle(p, z);
    INFO("a=" << a << " b=" << b << " c=" << c << " z=" << z);
    CHECK(rel_diff(s, pf) < 1e-10);
    CHECK(rel_diff(s, orc) < 1e-9);
  }
}

TEST_CASE("logarithmic continuation against Pfaff on [-10, -1.5]") {
  for (int i = 0; i <= 30; ++i) {
    const double zeta = -10.0 + i * (8.5 / 30.0);
    const Complex log_side = hyp2f1(kSixth, Complex(zeta, 0.0)).value;  // |z| >= 1.25 route
    const Complex pfaff_side = pfaff_transform(kSixth, zeta).value;
    INFO("zeta=" << zeta);
    CHECK(rel_diff(log_side, pfaff_side) < 1e-8);
  }
}

TEST_CASE("annulus and unit-circle dispatch against the oracle") {
  // representative awkward arguments: near 1, near the circle, near e^{i pi/3}
  const Complex pts[] = {{0.95, 0.0},   {0.9, 0.05},  {1.1, 0.02},  {-1.05, 0.0},
                         {0.5, 0.866},  {0.5, -0.866}, {0.95, 0.31}, {0.31, 0.95},
                         {1.02, 0.4},   {0.85, 0.0}};
  for (const HypTriple& p : {HypTriple{0.3, 0.2, 0.9}, HypTriple{1.4, 0.6, 2.1}, kSixth}) {
    for (Complex z : pts) {
      const Complex got = hyp2f1(p, z).value;
      const Complex want = hyp2f1_oracle(p, z);
      INFO("a=" << p.a << " b=" << p.b << " c=" << p.c << " z=" << z);
      CHECK(rel_diff(got, want) < 1e-9);
    }
  }
}

TEST_CASE("cut branches are one-sided limits and conjugates") {
  for (double x : {1.5, 1.1, 3.0}) {
    const Complex up = hyp2f1(kSixth, Complex(x, 0.0), Branch::Upper).value;
    const Complex lo = hyp2f1(kSixth, Complex(x, 0.0), Branch::Lower).value;
    CHECK(std::abs(up - std::conj(lo)) < 1e-12 * std::abs(up));
    const Complex near_up = hyp2f1(kSixth, Complex(x, 1e-9)).value;
    CHECK(std::abs(up - near_up) < 1e-6 * std::abs(up));
  }
  CHECK_THROWS_AS(hyp2f1(kSixth, Complex(1.5, 0.0)), CutError);
  CHECK_THROWS_AS(hyp2f1({0.9, 0.9, 1.3}, Complex(1.0, 0.0)), DomainError);  // c-a-b < 0
  CHECK_THROWS_AS(hyp2f1({0.2, 0.9, 0.0}, Complex(0.1, 0.0)), DomainError);  // bad c
}

TEST_CASE("two-term continuation for a != b") {
  // dispatcher sends |z| >= 1.25 with a-b non-integer through (app4)-type
  // connection; compare against Pfaff where the latter converges
  const HypTriple p{5.0 / 6.0, 1.0 / 6.0, 1.0};
  for (double z : {-2.0, -5.0, -1.3}) {
    const Complex c1 = hyp2f1(p, Complex(z, 0.0)).value;
    const Complex c2 = pfaff_transform(p, z).value;
    CHECK(rel_diff(c1, c2) < 1e-10);
  }
}
