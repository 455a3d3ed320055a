#ifndef POISTRI_NUMERICS_HPP
#define POISTRI_NUMERICS_HPP

#include <functional>
#include <limits>
#include <numbers>
#include <optional>

namespace poistri {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

double erfc(double x);

// Modified Bessel function of the first kind, order zero. Throws DomainError for x < 0.
double bessel_i0(double x);

// Catalan's constant G = sum_k (-1)^k / (2k+1)^2.
double catalan_constant();

// sin(x) - x cos(x), accurate for small |x| where the direct form cancels.
double sin_minus_x_cos(double x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Integrable 1/sqrt endpoint behaviour. The integrator removes it by substitution:
//   left:  x = A + (B-A) u^2
//   right: x = B - (B-A) u^2
//   both:  x = A + (B-A) sin^2 t
enum class EndpointSingularity { none, inverse_sqrt_left, inverse_sqrt_right, both };

// Bound |f(x)| <= C x^power exp(-rate x^2) on a half-line. Lets the integrator
// truncate instead of mapping the infinite interval.
struct GaussianDecay {
  double rate = kPi;
  int power = 0;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  EndpointSingularity singularity = EndpointSingularity::none;
  std::optional<GaussianDecay> decay;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

using Integrand1d = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

// Adaptive Gauss-Kronrod (7/15) with global bisection. `upper` may be +inf.
// A non-converged result carries the best estimate; NaN from `f` throws IntegrandError.
IntegralResult integrate_1d(const Integrand1d& f, double lower, double upper,
                            const QuadratureSpec& spec = {});

// Same as integrate_1d but throws QuadratureError when not converged.
double integrate_or_throw(const Integrand1d& f, double lower, double upper,
                          const QuadratureSpec& spec = {});

// Region {x0 < x < x1, y_lower(x) < y < y_upper(x)} for iterated integration.
struct Region2d {
  double x0 = 0.0;
  double x1 = 1.0;
  std::function<double(double)> y_lower;
  std::function<double(double)> y_upper;
  EndpointSingularity inner_singularity = EndpointSingularity::none;
  std::optional<GaussianDecay> outer_decay;

  static Region2d rectangle(double x0, double x1, double y0, double y1);
  // {x > 0, y > 0, x + y < bound}
  static Region2d simplex(double bound);
};

IntegralResult integrate_2d(const Integrand2d& f, const Region2d& region,
                            const QuadratureSpec& spec = {});

// Smallest X with  int_X^inf x^k e^{-rate x^2} dx <= rel_eps * int_0^inf x^k e^{-rate x^2} dx,
// using the bound Gamma(s,u) <= u^{s-1} e^{-u} / (1 - (s-1)/u), s = (k+1)/2.
double gaussian_truncation_point(const GaussianDecay& decay, double rel_eps = 1e-16);

}  // namespace poistri

#endif  // POISTRI_NUMERICS_HPP
