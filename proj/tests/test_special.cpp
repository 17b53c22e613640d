#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tricomi/special.hpp"

using namespace tricomi;

namespace {

// Euler-limit product oracle for Gamma: N^x N! / (x (x+1) ... (x+N)) in log
// space, Richardson-extrapolated in 1/N to kill the leading error term.
double gamma_product_oracle(double x) {
  auto partial = [&](long N) {
    double s = x * std::log((double)N);
    for (long k = 1; k <= N; ++k) s += std::log((double)k);
    for (long k = 0; k <= N; ++k) s -= std::log(x + k);
    return std::exp(s);
  };
  const double g1 = partial(40000), g2 = partial(80000);
  return 2.0 * g2 - g1;
}

}  // namespace

TEST_CASE("gamma known values") {
  CHECK(gamma_fn(0.5) == Catch::Approx(std::sqrt(kPi)).epsilon(1e-13));
  CHECK(gamma_fn(5.0) == Catch::Approx(24.0).epsilon(1e-13));
  // Gamma(-1/6) = -6 Gamma(5/6) by the recurrence
  const double g56 = gamma_fn(5.0 / 6.0);
  CHECK(gamma_fn(-1.0 / 6.0) == Catch::Approx(-6.0 * g56).epsilon(1e-13));
  CHECK(gamma_fn(-1.0 / 6.0) == Catch::Approx(-6.77272217944875577).epsilon(1e-13));
  CHECK(g56 == Catch::Approx(gamma_product_oracle(5.0 / 6.0)).epsilon(1e-7));
  CHECK(gamma_fn(0.3) == Catch::Approx(gamma_product_oracle(0.3)).epsilon(1e-7));
}

TEST_CASE("gamma poles rejected") {
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
}

TEST_CASE("gamma identity sweep") {
  // recurrence, duplication, reflection at 50 interior points
  for (int i = 1; i < 50; ++i) {
    const double x = i / 50.0;
    const double rec = gamma_fn(x + 1.0) / (x * gamma_fn(x));
    CHECK(rec == Catch::Approx(1.0).epsilon(1e-12));
    const double dup = gamma_fn(2.0 * x) /
                       (std::pow(2.0, 2.0 * x - 1.0) / std::sqrt(kPi) * gamma_fn(x) *
                        gamma_fn(x + 0.5));
    CHECK(dup == Catch::Approx(1.0).epsilon(1e-12));
    const double refl = gamma_fn(x) * gamma_fn(1.0 - x) * std::sin(kPi * x) / kPi;
    CHECK(refl == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(2.37, 0) == 1.0);
  CHECK(pochhammer(1.0 / 6.0, 2) == Catch::Approx(7.0 / 36.0).epsilon(1e-15));
  // direct product oracle
  double oracle = 1.0;
  for (int i = 0; i < 3; ++i) oracle *= 5.0 / 6.0 + i;
  CHECK(pochhammer(5.0 / 6.0, 3) == Catch::Approx(oracle).epsilon(1e-15));
  CHECK(pochhammer(5.0 / 6.0, 3) == Catch::Approx(935.0 / 216.0).epsilon(1e-15));
  // (a)_j = Gamma(a+j)/Gamma(a) away from poles
  CHECK(pochhammer(0.7, 5) ==
        Catch::Approx(gamma_fn(5.7) / gamma_fn(0.7)).epsilon(1e-13));
}

TEST_CASE("digamma basics") {
  const double euler = 0.57721566490153286;
  CHECK(digamma(1.0) == Catch::Approx(-euler).epsilon(1e-12));
  CHECK(digamma(0.5) == Catch::Approx(-euler - 2.0 * std::log(2.0)).epsilon(1e-12));
  for (double x : {0.17, 0.8, 2.3, 7.9}) {
    CHECK(digamma(x + 1.0) == Catch::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
    // reflection
    CHECK(digamma(1.0 - x) - digamma(x) ==
          Catch::Approx(kPi / std::tan(kPi * x)).margin(1e-10));
  }
  // negative non-integer arguments via reflection
  CHECK(digamma(-0.5) == Catch::Approx(2.0 - euler - 2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(digamma(-2.0), DomainError);
}
