#include "poistri/geom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poistri/errors.hpp"
#include "poistri/numerics.hpp"

namespace poistri {

Triangle::Triangle(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw DomainError("Triangle: sides must be finite and positive");
  const double slack = std::min({b + c - a, a + c - b, a + b - c});
  if (!(slack > kDegeneracyTolerance))
    throw DomainError("Triangle: degenerate (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                      std::to_string(c) + ")");
}

TriangleAngles::TriangleAngles(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  for (double x : {alpha, beta, gamma})
    if (!(x > 0.0 && x < kPi)) throw DomainError("TriangleAngles: each angle must lie in (0, pi)");
  if (std::abs(alpha + beta + gamma - kPi) > 1e-12)
    throw DomainError("TriangleAngles: angles must sum to pi");
}

double TriangleAngles::max() const noexcept { return std::max({alpha_, beta_, gamma_}); }

double heron_product(double a, double b, double c) noexcept {
  return (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c);
}

TriangleAngles angles_from_sides(const Triangle& t) {
  const double a = t.a(), b = t.b(), c = t.c();
  // sin and cos of each angle share the denominator 2*(adjacent sides), so
  // atan2(sqrt(Delta), law-of-cosines numerator) gives the angle directly.
  const double root = std::sqrt(heron_product(a, b, c));
  const double alpha = std::atan2(root, b * b + c * c - a * a);
  const double beta = std::atan2(root, a * a + c * c - b * b);
  const double gamma = std::atan2(root, a * a + b * b - c * c);
  return TriangleAngles(alpha, beta, gamma);
}

Triangle sides_from_angles(double alpha, double beta, double c) {
  if (!(alpha > 0.0 && beta > 0.0 && c > 0.0)) throw DomainError("sides_from_angles: inputs must be positive");
  if (!(alpha + beta < kPi)) throw DomainError("sides_from_angles: alpha + beta must be < pi");
  const double s = std::sin(alpha + beta);
  return Triangle(c * std::sin(alpha) / s, c * std::sin(beta) / s, c);
}

double area(const Triangle& t) { return 0.25 * std::sqrt(heron_product(t.a(), t.b(), t.c())); }

bool is_obtuse(const TriangleAngles& angles) noexcept { return angles.max() > 0.5 * kPi + 1e-12; }

}  // namespace poistri
