#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "poistri/errors.hpp"
#include "poistri/numerics.hpp"

using namespace poistri;

namespace {

// Catalan's constant from the Ramanujan-type series
//   G = (pi/8) ln(2 + sqrt 3) + (3/8) sum_n (n!)^2 / ((2n)! (2n+1)^2),
// which converges like 4^-n and shares nothing with the stored constant.
long double catalan_series() {
  long double sum = 0.0L;
  long double ratio = 1.0L;  // (n!)^2/(2n)!
  for (int n = 0; n < 60; ++n) {
    sum += ratio / ((2.0L * n + 1) * (2.0L * n + 1));
    ratio *= (n + 1.0L) * (n + 1.0L) / ((2.0L * n + 1) * (2.0L * n + 2));
  }
  const long double pi = 3.141592653589793238462643383279502884L;
  return pi / 8.0L * std::log(2.0L + std::sqrt(3.0L)) + 0.375L * sum;
}

long double bessel_i0_series(long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= (x * x / 4.0L) / (static_cast<long double>(k) * k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("erfc reference values") {
  CHECK(poistri::erfc(0.0) == 1.0);
  // 40-digit mpmath values
  const std::vector<std::pair<double, double>> table = {
      {std::sqrt(kPi), 0.0121888821848028868923883},
      {0.1, 0.8875370839817151015952877},
      {0.5, 0.4795001221869534623172533},
      {1.3, 0.06599205505934755414981464},
      {2.7, 0.0001343327399405241923740074},
      {5.0, 1.537459794428034850188343e-12},
      {12.0, 1.356261169205904212780306e-64},
      {26.0, 5.663192408856142846475728e-296},
  };
  for (auto [x, want] : table) CHECK(std::abs(poistri::erfc(x) - want) <= 1e-14 * want);
}

TEST_CASE("erfc reflection identity") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double x = dist(gen);
    CHECK(poistri::erfc(-x) == doctest::Approx(2.0 - poistri::erfc(x)).epsilon(1e-15));
  }
}

TEST_CASE("bessel_i0") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0(kPi / 2) == doctest::Approx(static_cast<double>(bessel_i0_series(kPi / 2.0L))).epsilon(1e-15));
  CHECK(bessel_i0(kPi / 2) == doctest::Approx(1.718753848187564508139287).epsilon(1e-15));
  const std::vector<std::pair<double, double>> table = {
      {0.1, 1.002501562934095601678113},  {1.0, 1.266065877752008335598245},
      {5.0, 27.23987182360444689454423},  {10.0, 2815.716628466254471469811},
      {29.9, 708478330489.0145260685944}, {30.5, 1278062138712.566474690029},
      {50.0, 293255378384933632665.4675}, {100.0, 1.073751707131073823519721e+42},
      {500.0, 2.504809476570078096551412e+215},
  };
  for (auto [x, want] : table) CHECK(std::abs(bessel_i0(x) - want) <= 1e-14 * want);
  CHECK_THROWS_AS(bessel_i0(-1.0), DomainError);
}

TEST_CASE("staked acuteness closed form from special functions") {
  const double p = 0.5 * (std::exp(-kPi / 2) * bessel_i0(kPi / 2) - poistri::erfc(std::sqrt(kPi)));
  CHECK(std::abs(p - 0.1725524698) < 1e-9);
}

TEST_CASE("catalan constant matches an independent series") {
  CHECK(std::abs(catalan_constant() - static_cast<double>(catalan_series())) < 2e-16);
  CHECK(catalan_constant() == doctest::Approx(0.91596559417721901).epsilon(1e-16));
  CHECK((1 + 2 * catalan_constant()) / kPi == doctest::Approx(0.90143169424542823).epsilon(1e-15));
  CHECK((5 + 2 * catalan_constant()) / kPi == doctest::Approx(2.1746712389805909).epsilon(1e-15));
}

TEST_CASE("sin_minus_x_cos small-argument series") {
  for (double x : {1e-8, 1e-3, 0.1, 0.3, 0.49, 0.51, 1.0, 2.0}) {
    // long double direct evaluation is accurate enough away from zero; compare relatively
    const long double lx = x;
    const long double direct = std::sin(lx) - lx * std::cos(lx);
    if (x > 0.05) CHECK(sin_minus_x_cos(x) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-13));
  }
  CHECK(sin_minus_x_cos(1e-5) == doctest::Approx(1e-15 / 3.0).epsilon(1e-12));
}

TEST_CASE("integrate_1d examples") {
  QuadratureSpec spec;
  spec.decay = GaussianDecay{kPi, 3};
  auto r = integrate_1d([](double c) { return c * c * c * std::exp(-kPi * c * c); }, 0.0, kInf, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / (2 * kPi * kPi)).epsilon(1e-12));

  QuadratureSpec left;
  left.singularity = EndpointSingularity::inverse_sqrt_left;
  r = integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, left);
  CHECK(std::abs(r.value - 2.0) < 1e-10);

  r = integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(std::abs(r.value - 2.0) < 1e-12);
}

TEST_CASE("integrate_1d reports NaN with its location") {
  try {
    integrate_1d([](double x) { return x > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0);
    FAIL("expected IntegrandError");
  } catch (const IntegrandError& e) {
    CHECK(e.point() > 0.5);
  }
}

TEST_CASE("integrate_1d non-convergence keeps the best estimate") {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  spec.abs_tol = spec.rel_tol = 1e-14;
  const auto r = integrate_1d([](double x) { return std::sin(50 * x) * std::sin(50 * x); }, 0.0, 10.0, spec);
  CHECK_FALSE(r.converged);
  CHECK(r.error > 0.0);
  CHECK_THROWS_AS(integrate_or_throw([](double x) { return std::sin(50 * x) * std::sin(50 * x); }, 0.0, 10.0, spec),
                  QuadratureError);
}

TEST_CASE("error estimates are honest on a battery of known integrals") {
  struct Case {
    Integrand1d f;
    double lo, hi, exact;
    EndpointSingularity sing = EndpointSingularity::none;
    std::optional<GaussianDecay> decay = std::nullopt;
  };
  using ES = EndpointSingularity;
  const std::vector<Case> cases = {
      {[](double x) { return std::pow(x, 5); }, 0, 1, 1.0 / 6},
      {[](double x) { return x * std::exp(-kPi * x * x); }, 0, kInf, 1 / (2 * kPi), ES::none, GaussianDecay{kPi, 1}},
      {[](double x) { return x * x * x * std::exp(-kPi * x * x); }, 0, kInf, 1 / (2 * kPi * kPi), ES::none,
       GaussianDecay{kPi, 3}},
      {[](double x) { return std::exp(-kPi * x * x); }, 0, kInf, 0.5, ES::none, GaussianDecay{kPi, 0}},
      {[](double x) { return std::pow(x, 4) * std::exp(-kPi * x * x); }, 0, kInf, 3 / (8 * kPi * kPi), ES::none,
       GaussianDecay{kPi, 4}},
      {[](double x) { return 1 / std::sqrt(x); }, 0, 1, 2.0, ES::inverse_sqrt_left},
      {[](double x) { return 1 / std::sqrt(1 - x); }, 0, 1, 2.0, ES::inverse_sqrt_right},
      {[](double x) { return 1 / std::sqrt(x * (1 - x)); }, 0, 1, kPi, ES::both},
      {[](double x) { return std::sin(x); }, 0, kPi, 2.0},
      {[](double x) { return std::pow(std::cos(3 * x), 2); }, 0, 2 * kPi, kPi},
      {[](double x) { return std::sin(5 * x); }, 0, 10, (1 - std::cos(50.0)) / 5},
      {[](double x) { return std::log(x); }, 0, 1, -1.0},
      {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3},
      {[](double x) { return 1 / (x * x); }, 1, kInf, 1.0},
      {[](double x) { return 1 / (1 + x * x); }, 0, kInf, kPi / 2},
      {[](double x) { return std::exp(-x); }, 0, kInf, 1.0},
      {[](double x) { return 1 / (1 + 25 * x * x); }, -1, 1, 0.4 * std::atan(5.0)},
      {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1},
      {[](double x) { return std::abs(x - 1); }, 0, 2, 1.0},
      {[](double x) { return std::pow(x, -0.3); }, 0, 1, 1 / 0.7},
  };
  REQUIRE(cases.size() == 20);
  for (const auto& c : cases) {
    QuadratureSpec spec;
    spec.singularity = c.sing;
    spec.decay = c.decay;
    const auto r = integrate_1d(c.f, c.lo, c.hi, spec);
    const double true_error = std::abs(r.value - c.exact);
    CHECK(true_error <= 10 * r.error);
    CHECK(true_error < 1e-6);
  }
}

TEST_CASE("sin^2 substitution integrates the Delta-edge shape exactly") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  QuadratureSpec spec;
  spec.singularity = EndpointSingularity::both;
  for (int i = 0; i < 10; ++i) {
    double lo = dist(gen), hi = dist(gen);
    if (lo > hi) std::swap(lo, hi);
    const auto r = integrate_1d([&](double b) { return 1 / std::sqrt((hi - b) * (b - lo)); }, lo, hi, spec);
    CHECK(std::abs(r.value - kPi) < 1e-10);
  }
}

TEST_CASE("gaussian truncation leaves less than 1e-16 of the mass") {
  for (int k = 0; k <= 7; ++k) {
    for (double rate : {kPi, kPi / 4}) {
      const double cut = gaussian_truncation_point({rate, k});
      // tail / total = Q((k+1)/2, rate cut^2) exactly
      const double fraction = boost::math::gamma_q(0.5 * (k + 1), rate * cut * cut);
      CHECK(fraction < 1e-16);
      CHECK(fraction > 1e-19);  // not absurdly far out
    }
  }
}

TEST_CASE("integrate_2d") {
  auto r = integrate_2d([](double, double) { return 1.0; }, Region2d::rectangle(0, 1, 0, 1));
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  // area of the simplex {x+y<pi}
  r = integrate_2d([](double, double) { return 1.0; }, Region2d::simplex(kPi));
  CHECK(r.value == doctest::Approx(kPi * kPi / 2).epsilon(1e-12));
  r = integrate_2d([](double x, double y) { return x * y; }, Region2d::rectangle(0, 2, 0, 3));
  CHECK(r.value == doctest::Approx(9.0).epsilon(1e-12));
}
