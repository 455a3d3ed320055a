#include "poistri/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "poistri/errors.hpp"

namespace poistri {

double erfc(double x) { return std::erfc(x); }

double bessel_i0(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_i0: argument must be >= 0");
  if (x <= 30.0) {
    // sum (x^2/4)^k / (k!)^2, all terms positive
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return sum;
  }
  // e^x / sqrt(2 pi x) * sum_k prod_{j<=k} (2j-1)^2 / (j (8x))
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
}

double catalan_constant() { return 0.91596559417721901505460351493238411; }

double sin_minus_x_cos(double x) {
  if (std::abs(x) >= 0.5) return std::sin(x) - x * std::cos(x);
  // sum_{k>=1} (-1)^{k+1} 2k x^{2k+1} / (2k+1)!
  const double x2 = x * x;
  double power = x * x2;  // x^{2k+1}
  double factorial = 6.0;  // (2k+1)!
  double sum = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double term = 2.0 * k * power / factorial;
    sum += (k % 2 == 1) ? term : -term;
    power *= x2;
    factorial *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
  }
  return sum;
}

double gaussian_truncation_point(const GaussianDecay& decay, double rel_eps) {
  if (!(decay.rate > 0.0) || decay.power < 0 || !(rel_eps > 0.0))
    throw std::invalid_argument("gaussian_truncation_point: bad decay hint");
  const double s = 0.5 * (decay.power + 1);
  const double log_gamma_s = std::lgamma(s);
  const double log_eps = std::log(rel_eps);
  // log of the bound on Gamma(s,u)/Gamma(s)
  auto log_bound = [&](double u) {
    double correction = 1.0;
    if (s > 1.0) correction = 1.0 - (s - 1.0) / u;
    return (s - 1.0) * std::log(u) - u - std::log(correction) - log_gamma_s;
  };
  double u = std::max(2.0 * s, 1.0);
  while (log_bound(u) > log_eps) u *= 1.02;
  return std::sqrt(u / decay.rate);
}

namespace {

// Gauss-Kronrod 15-point nodes on [-1,1] (nonnegative half, descending) and weights;
// the 7-point Gauss rule uses the odd-indexed nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_15(const Integrand1d& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = g(center - dx);
    const double f2 = g(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  error = std::max(error, 50.0 * kEpsilon * abs_sum * std::abs(half));
  return {a, b, value, error};
}

IntegralResult adaptive(const Integrand1d& g, double a, double b, const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
    throw std::invalid_argument("QuadratureSpec: tolerances must be > 0 and max_subdivisions >= 1");
  IntegralResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::vector<Segment> heap;
  std::vector<Segment> frozen;  // too narrow to bisect further
  heap.push_back(gauss_kronrod_15(g, a, b));
  double total = heap.front().value;
  double total_error = heap.front().error;
  int segments = 1;
  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  // Re-sum from the pieces so the running-update drift does not leak into the answer.
  auto resum = [&] {
    total = 0.0;
    total_error = 0.0;
    for (const auto* pieces : {&frozen, &heap})
      for (const auto& piece : *pieces) {
        total += piece.value;
        total_error += piece.error;
      }
  };
  for (;;) {
    if (total_error <= tolerance()) {
      resum();
      if (total_error <= tolerance()) break;
    }
    if (segments >= spec.max_subdivisions || heap.empty()) break;
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        std::abs(worst.b - worst.a) < 16.0 * kEpsilon * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = gauss_kronrod_15(g, worst.a, mid);
    const Segment right = gauss_kronrod_15(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++segments;
  }
  resum();
  result.value = total;
  result.error = total_error;
  result.subdivisions = segments;
  result.converged = total_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return result;
}

void check_finite(double fx, double x) {
  if (std::isnan(fx)) throw IntegrandError("integrand returned NaN at x = " + std::to_string(x), x);
}

}  // namespace

IntegralResult integrate_1d(const Integrand1d& f, double lower, double upper,
                            const QuadratureSpec& spec) {
  if (std::isnan(lower) || std::isnan(upper)) throw std::invalid_argument("integrate_1d: NaN bound");
  if (upper < lower) {
    IntegralResult r = integrate_1d(f, upper, lower, spec);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(lower)) throw std::invalid_argument("integrate_1d: lower bound must be finite");

  using ES = EndpointSingularity;
  if (std::isinf(upper)) {
    if (spec.singularity == ES::inverse_sqrt_right || spec.singularity == ES::both)
      throw std::invalid_argument("integrate_1d: right-endpoint singularity on an infinite interval");
    if (spec.decay) {
      const double cut = gaussian_truncation_point(*spec.decay);
      if (cut > lower) return integrate_1d(f, lower, cut, spec);
    }
    if (spec.singularity != ES::none)
      throw std::invalid_argument("integrate_1d: endpoint singularity needs a finite or truncated interval");
    // x = lower + t / (1 - t)
    auto g = [&](double t) {
      const double s = 1.0 - t;
      const double x = lower + t / s;
      if (std::isinf(x)) return 0.0;
      const double fx = f(x);
      check_finite(fx, x);
      return fx / (s * s);
    };
    return adaptive(g, 0.0, 1.0, spec);
  }

  const double width = upper - lower;
  switch (spec.singularity) {
    case ES::none: {
      auto g = [&](double x) {
        const double fx = f(x);
        check_finite(fx, x);
        return fx;
      };
      return adaptive(g, lower, upper, spec);
    }
    case ES::inverse_sqrt_left: {
      auto g = [&](double u) {
        const double x = lower + width * u * u;
        const double fx = f(x);
        check_finite(fx, x);
        return fx * 2.0 * width * u;
      };
      return adaptive(g, 0.0, 1.0, spec);
    }
    case ES::inverse_sqrt_right: {
      auto g = [&](double u) {
        const double x = upper - width * u * u;
        const double fx = f(x);
        check_finite(fx, x);
        return fx * 2.0 * width * u;
      };
      return adaptive(g, 0.0, 1.0, spec);
    }
    case ES::both: {
      auto g = [&](double t) {
        // evaluate from the nearer endpoint to keep the distance to it exact
        const double x = t < 0.25 * kPi ? lower + width * std::pow(std::sin(t), 2)
                                        : upper - width * std::pow(std::cos(t), 2);
        const double fx = f(x);
        check_finite(fx, x);
        return fx * width * std::sin(2.0 * t);
      };
      return adaptive(g, 0.0, 0.5 * kPi, spec);
    }
  }
  throw std::logic_error("integrate_1d: unknown singularity flag");
}

double integrate_or_throw(const Integrand1d& f, double lower, double upper,
                          const QuadratureSpec& spec) {
  const IntegralResult r = integrate_1d(f, lower, upper, spec);
  if (!r.converged)
    throw QuadratureError("quadrature did not converge", r.value, r.error);
  return r.value;
}

Region2d Region2d::rectangle(double x0, double x1, double y0, double y1) {
  Region2d r;
  r.x0 = x0;
  r.x1 = x1;
  r.y_lower = [y0](double) { return y0; };
  r.y_upper = [y1](double) { return y1; };
  return r;
}

Region2d Region2d::simplex(double bound) {
  Region2d r;
  r.x0 = 0.0;
  r.x1 = bound;
  r.y_lower = [](double) { return 0.0; };
  r.y_upper = [bound](double x) { return bound - x; };
  return r;
}

IntegralResult integrate_2d(const Integrand2d& f, const Region2d& region, const QuadratureSpec& spec) {
  if (!region.y_lower || !region.y_upper) throw std::invalid_argument("integrate_2d: region bounds unset");
  const double width = region.x1 - region.x0;
  QuadratureSpec inner = spec;
  inner.singularity = region.inner_singularity;
  inner.decay.reset();
  inner.abs_tol = std::isfinite(width) && width > 1.0 ? 0.1 * spec.abs_tol / width : 0.1 * spec.abs_tol;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.max_subdivisions = std::min(spec.max_subdivisions, 200);

  bool inner_ok = true;
  double inner_error = 0.0;
  auto marginal = [&](double x) {
    const double lo = region.y_lower(x);
    const double hi = region.y_upper(x);
    if (!(hi > lo)) return 0.0;
    const IntegralResult r = integrate_1d([&](double y) { return f(x, y); }, lo, hi, inner);
    inner_ok = inner_ok && r.converged;
    inner_error = std::max(inner_error, r.error);
    return r.value;
  };
  QuadratureSpec outer = spec;
  outer.singularity = EndpointSingularity::none;
  outer.decay = region.outer_decay;
  IntegralResult result = integrate_1d(marginal, region.x0, region.x1, outer);
  const double span = std::isfinite(width) ? width : 1.0;
  result.error += inner_error * span;
  result.converged = result.converged && inner_ok;
  return result;
}

}  // namespace poistri
