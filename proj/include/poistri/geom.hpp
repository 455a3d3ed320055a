#ifndef POISTRI_GEOM_HPP
#define POISTRI_GEOM_HPP

namespace poistri {

// Absolute slack below which a triangle inequality counts as violated.
inline constexpr double kDegeneracyTolerance = 1e-12;

// Side lengths; a, b, c are opposite the angles alpha, beta, gamma.
class Triangle {
 public:
  // Throws DomainError unless every side is positive and every triangle
  // inequality holds with slack > kDegeneracyTolerance.
  Triangle(double a, double b, double c);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

 private:
  double a_;
  double b_;
  double c_;
};

class TriangleAngles {
 public:
  // Throws DomainError unless each angle lies in (0, pi) and the sum is pi within 1e-12.
  TriangleAngles(double alpha, double beta, double gamma);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double max() const noexcept;

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

// (a+b+c)(-a+b+c)(a-b+c)(a+b-c) = 16 area^2. No validation; negative outside the triangle cone.
double heron_product(double a, double b, double c) noexcept;

TriangleAngles angles_from_sides(const Triangle& t);

// Sides from two angles and the side between them (c, opposite gamma).
Triangle sides_from_angles(double alpha, double beta, double c);

double area(const Triangle& t);

// A right angle (within 1e-12) is not obtuse.
bool is_obtuse(const TriangleAngles& angles) noexcept;

}  // namespace poistri

#endif  // POISTRI_GEOM_HPP
