#ifndef POISTRI_ERRORS_HPP
#define POISTRI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace poistri {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs outside an operation's domain (degenerate triangles, alpha+beta >= pi, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An integrand returned NaN; `point` is the abscissa in the caller's variable.
class IntegrandError : public Error {
 public:
  IntegrandError(const std::string& what, double point) : Error(what), point_(point) {}
  double point() const noexcept { return point_; }

 private:
  double point_;
};

// Quadrature gave up before reaching the requested tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Requested moment does not exist (e.g. E[(b/c)^2]).
class DivergentError : public Error {
 public:
  using Error::Error;
};

}  // namespace poistri

#endif  // POISTRI_ERRORS_HPP
