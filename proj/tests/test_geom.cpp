#include <cmath>
#include <random>

#include "doctest.h"
#include "poistri/errors.hpp"
#include "poistri/geom.hpp"
#include "poistri/numerics.hpp"

using namespace poistri;

TEST_CASE("angles_from_sides") {
  const auto eq = angles_from_sides(Triangle(1, 1, 1));
  CHECK(eq.alpha() == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(eq.beta() == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(eq.gamma() == doctest::Approx(kPi / 3).epsilon(1e-15));

  const auto right = angles_from_sides(Triangle(3, 4, 5));
  CHECK(right.gamma() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(right.max() == right.gamma());

  // 40-digit law-of-cosines evaluation
  const auto isosceles = angles_from_sides(Triangle(2, 2, 3));
  CHECK(isosceles.alpha() == doctest::Approx(0.72273424781341561118).epsilon(1e-15));
  CHECK(isosceles.beta() == doctest::Approx(0.72273424781341561118).epsilon(1e-15));
  CHECK(isosceles.gamma() == doctest::Approx(1.6961241579629620161).epsilon(1e-15));
}

TEST_CASE("degenerate triangles are domain errors") {
  CHECK_THROWS_AS(Triangle(1, 2, 3), DomainError);
  CHECK_THROWS_AS(Triangle(1, 1, 2 - 1e-13), DomainError);
  CHECK_THROWS_AS(Triangle(0, 1, 1), DomainError);
  CHECK_THROWS_AS(Triangle(-1, 1, 1), DomainError);
  CHECK_NOTHROW(Triangle(1, 1, 2 - 1e-9));
  CHECK_THROWS_AS(TriangleAngles(1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(TriangleAngles(0.0, 1.0, kPi - 1.0), DomainError);
}

TEST_CASE("sides_from_angles") {
  const Triangle eq = sides_from_angles(kPi / 3, kPi / 3, 1.0);
  CHECK(eq.a() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eq.b() == doctest::Approx(1.0).epsilon(1e-15));
  const Triangle t = sides_from_angles(kPi / 2, kPi / 4, 1.0);
  CHECK(t.a() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.b() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sides_from_angles(2.0, 1.2, 1.0), DomainError);
  CHECK_THROWS_AS(sides_from_angles(kPi / 2, kPi / 2, 1.0), DomainError);
}

TEST_CASE("area") {
  CHECK(area(Triangle(3, 4, 5)) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(area(Triangle(1, 1, 1)) == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-15));
  CHECK(area(Triangle(2, 3, 4)) == doctest::Approx(std::sqrt(135.0) / 4).epsilon(1e-15));
}

TEST_CASE("is_obtuse") {
  CHECK_FALSE(is_obtuse(TriangleAngles(kPi / 3, kPi / 3, kPi / 3)));
  CHECK_FALSE(is_obtuse(angles_from_sides(Triangle(3, 4, 5))));
  CHECK(is_obtuse(TriangleAngles(0.2, 0.3, kPi - 0.5)));
}

TEST_CASE("property: round trip, law of sines, two area formulas") {
  std::mt19937_64 gen(2017);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    // uniform on the angle simplex, every angle at least 0.01
    double alpha, beta;
    do {
      alpha = kPi * unit(gen);
      beta = kPi * unit(gen);
    } while (alpha < 0.01 || beta < 0.01 || kPi - alpha - beta < 0.01);
    const double c = std::exp(4.0 * unit(gen) - 2.0);
    const Triangle t = sides_from_angles(alpha, beta, c);
    const TriangleAngles back = angles_from_sides(t);
    REQUIRE(std::abs(back.alpha() - alpha) <= 1e-10 * alpha);
    REQUIRE(std::abs(back.beta() - beta) <= 1e-10 * beta);
    const double gamma = kPi - alpha - beta;
    REQUIRE(std::abs(back.gamma() - gamma) <= 1e-10 * gamma);

    const double k = t.a() / std::sin(back.alpha());
    REQUIRE(std::abs(t.b() / std::sin(back.beta()) - k) <= 1e-10 * k);
    REQUIRE(std::abs(t.c() / std::sin(back.gamma()) - k) <= 1e-10 * k);

    const double heron = area(t);
    REQUIRE(std::abs(heron - 0.5 * t.b() * t.c() * std::sin(back.alpha())) <= 1e-10 * heron);
  }
}
