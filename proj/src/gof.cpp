#include "poistri/gof.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>

#include "poistri/errors.hpp"
#include "poistri/numerics.hpp"

namespace poistri {

namespace {

constexpr double kHalfPi = 0.5 * kPi;

// Density with the tagged singular points mapped to 0 (they carry no mass).
std::function<double(double)> univariate(DensityKind kind) {
  return [kind](double x) {
    const double arg[1] = {x};
    const DensityValue v = evaluate(kind, arg);
    return v.singular ? 0.0 : v.value;
  };
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() < 2) throw std::invalid_argument("EmpiricalSample: need at least 2 values");
  for (double v : values_)
    if (std::isnan(v)) throw std::invalid_argument("EmpiricalSample: NaN value");
  std::sort(values_.begin(), values_.end());
}

UnivariateLaw law_for(DensityKind kind) {
  const Support& s = support(kind);
  if (s.dimension != 1) throw std::invalid_argument(std::string(to_string(kind)) + " is not univariate");
  UnivariateLaw law{std::string(to_string(kind)), univariate(kind), s.lower, s.upper, {}, 1.0};
  using K = DensityKind;
  switch (kind) {
    case K::pinned_beta: law.breakpoints = {kHalfPi}; break;
    case K::ratio_c_over_a:
    case K::ratio_a_over_c: law.breakpoints = {0.5, 1.0, 2.0}; break;
    case K::ratio_b_over_a: law.breakpoints = {1.0}; break;
    case K::uT_side_a:
    case K::uT_ratio:
    case K::uT_max: law.breakpoints = {1.0}; break;
    case K::uT_min: law.breakpoints = {0.5}; break;
    default: break;
  }
  return law;
}

UnivariateLaw staked_angle_law(Angle which) {
  if (which == Angle::gamma) throw std::invalid_argument("staked_angle_law: alpha or beta");
  return {which == Angle::alpha ? "staked_alpha" : "staked_beta",
          [which](double x) { return staked_angle_marginal(which, x); }, 0.0, kPi, {}, 1.0};
}

UnivariateLaw anchored_angle_law() {
  return {"anchored_alpha", [](double x) { return anchored_angle_marginal(x); }, 0.0, kPi, {}, 1.0};
}

SampledStatistic statistic_for(DensityKind kind) {
  using K = DensityKind;
  using T = const TriangleSample&;
  switch (kind) {
    case K::pinned_sides_joint:
    case K::pair_ab:
    case K::pair_ac_integral:
    case K::pinned_a: return {Family::pinned, "a", [](T t) { return t.triangle.a(); }, law_for(K::pinned_a)};
    case K::pair_bc:
    case K::pinned_b: return {Family::pinned, "b", [](T t) { return t.triangle.b(); }, law_for(K::pinned_b)};
    case K::pinned_c: return {Family::pinned, "c", [](T t) { return t.triangle.c(); }, law_for(K::pinned_c)};
    case K::pinned_angles_joint:
    case K::pinned_alpha:
      return {Family::pinned, "alpha", [](T t) { return t.angles.alpha(); }, law_for(K::pinned_alpha)};
    case K::pinned_beta:
      return {Family::pinned, "beta", [](T t) { return t.angles.beta(); }, law_for(K::pinned_beta)};
    case K::pinned_gamma:
      return {Family::pinned, "gamma", [](T t) { return t.angles.gamma(); }, law_for(K::pinned_gamma)};
    case K::ratio_a_over_b:
      return {Family::pinned, "a/b", [](T t) { return t.triangle.a() / t.triangle.b(); }, law_for(kind)};
    case K::ratio_b_over_a:
      return {Family::pinned, "b/a", [](T t) { return t.triangle.b() / t.triangle.a(); }, law_for(kind)};
    case K::ratio_b_over_c:
      return {Family::pinned, "b/c", [](T t) { return t.triangle.b() / t.triangle.c(); }, law_for(kind)};
    case K::ratio_c_over_b:
      return {Family::pinned, "c/b", [](T t) { return t.triangle.c() / t.triangle.b(); }, law_for(kind)};
    case K::ratio_c_over_a:
      return {Family::pinned, "c/a", [](T t) { return t.triangle.c() / t.triangle.a(); }, law_for(kind)};
    case K::ratio_a_over_c:
      return {Family::pinned, "a/c", [](T t) { return t.triangle.a() / t.triangle.c(); }, law_for(kind)};
    case K::staked_angles_joint:
      return {Family::staked, "alpha", [](T t) { return t.angles.alpha(); }, staked_angle_law(Angle::alpha)};
    case K::anchored_angles_joint:
      return {Family::anchored, "alpha", [](T t) { return t.angles.alpha(); }, anchored_angle_law()};
    case K::uT_sides_joint:
    case K::uT_side_a:
      return {Family::uniform_t, "a", [](T t) { return t.triangle.a(); }, law_for(K::uT_side_a)};
    case K::uT_ratio:
      return {Family::uniform_t, "a/b", [](T t) { return t.triangle.a() / t.triangle.b(); }, law_for(kind)};
    case K::uT_max:
      return {Family::uniform_t, "max(a,b)", [](T t) { return std::max(t.triangle.a(), t.triangle.b()); },
              law_for(kind)};
    case K::uT_min:
      return {Family::uniform_t, "min(a,b)", [](T t) { return std::min(t.triangle.a(), t.triangle.b()); },
              law_for(kind)};
  }
  throw std::invalid_argument("statistic_for: unknown kind");
}

double cdf_from_pdf(const UnivariateLaw& law, double x, double tol) {
  if (!(x > law.lower)) return 0.0;
  std::vector<double> cuts{law.lower};
  for (double b : law.breakpoints)
    if (b < x) cuts.push_back(b);
  cuts.push_back(std::min(x, law.upper));
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureSpec spec;
    spec.abs_tol = tol;
    spec.rel_tol = tol;
    spec.max_subdivisions = 2000;
    total += integrate_or_throw(law.pdf, cuts[i], cuts[i + 1], spec);
  }
  return std::clamp(total, 0.0, 1.0);
}

double cdf_from_pdf(DensityKind kind, double x, double tol) { return cdf_from_pdf(law_for(kind), x, tol); }

TabulatedCdf::TabulatedCdf(const UnivariateLaw& law, std::size_t cells, double tol)
    : name_(law.name), pdf_(law.pdf), tol_(tol), lower_(law.lower), upper_(law.upper), scale_(law.scale) {
  if (cells < 2) throw std::invalid_argument("TabulatedCdf: need at least 2 cells");
  for (std::size_t k = 0; k <= cells; ++k) t_.push_back(static_cast<double>(k) / static_cast<double>(cells));
  for (double b : law.breakpoints)
    if (b > lower_ && b < upper_) t_.push_back(to_t(b));
  std::sort(t_.begin(), t_.end());
  t_.erase(std::unique(t_.begin(), t_.end()), t_.end());

  QuadratureSpec spec;
  spec.abs_tol = tol;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 200;
  cdf_.assign(t_.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    const IntegralResult r = integrate_1d(law.pdf, to_x(t_[k]), to_x(t_[k + 1]), spec);
    cdf_[k + 1] = cdf_[k] + std::max(0.0, r.value);
  }
}

double TabulatedCdf::to_t(double x) const {
  if (std::isfinite(upper_)) return (x - lower_) / (upper_ - lower_);
  const double u = (x - lower_) / scale_;
  return u / (1.0 + u);
}

double TabulatedCdf::to_x(double t) const {
  if (t >= 1.0) return upper_;
  if (std::isfinite(upper_)) return lower_ + (upper_ - lower_) * t;
  return lower_ + scale_ * t / (1.0 - t);
}

double TabulatedCdf::exact(double x) const {
  if (!(x > lower_)) return 0.0;
  if (!(x < upper_)) return std::min(1.0, cdf_.back());
  const double t = to_t(x);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  QuadratureSpec spec;
  spec.abs_tol = tol_;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 200;
  const double partial = integrate_1d(pdf_, to_x(t_[k]), x, spec).value;
  return std::clamp(cdf_[k] + std::max(0.0, partial), 0.0, 1.0);
}

double TabulatedCdf::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("TabulatedCdf::quantile: p outside [0, 1]");
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
  if (it == cdf_.begin()) return lower_;
  if (it == cdf_.end()) return upper_;
  const std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
  const double lo = to_x(t_[k - 1]);
  const double hi = to_x(t_[k]);
  if (!(cdf_[k] > p)) return hi;
  if (!std::isfinite(hi)) {
    const double span = cdf_[k] - cdf_[k - 1];
    return to_x(t_[k - 1] + (p - cdf_[k - 1]) / span * (t_[k] - t_[k - 1]));
  }
  QuadratureSpec spec;
  spec.abs_tol = tol_;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 200;
  const auto g = [&](double x) {
    return x <= lo ? cdf_[k - 1] - p : x >= hi ? cdf_[k] - p : cdf_[k - 1] + integrate_1d(pdf_, lo, x, spec).value - p;
  };
  boost::uintmax_t iterations = 100;
  const auto root =
      boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(48), iterations);
  return 0.5 * (root.first + root.second);
}

double TabulatedCdf::operator()(double x) const {
  if (!(x > lower_)) return 0.0;
  if (!(x < upper_)) return std::min(1.0, cdf_.back());
  const double t = to_t(x);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return std::min(1.0, cdf_.back());
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (t - t_[k]) / (t_[k + 1] - t_[k]);
  return std::clamp(cdf_[k] + w * (cdf_[k + 1] - cdf_[k]), 0.0, 1.0);
}

double kolmogorov_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("kolmogorov_critical_value: alpha in (0, 1)");
  // P(K > c) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 c^2)
  auto tail = [](double c) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * c * c);
      sum += (k % 2 == 1 ? term : -term);
      if (term < 1e-300) break;
    }
    return 2.0 * sum;
  };
  boost::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve([&](double c) { return tail(c) - alpha; }, 0.2, 10.0,
                                                      boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (root.first + root.second);
}

GofReport ks_one_sample(const EmpiricalSample& sample, const std::function<double(double)>& cdf, double alpha) {
  const auto& v = sample.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  GofReport r;
  r.test = "ks-one-sample";
  r.statistic = d;
  r.threshold = kolmogorov_critical_value(alpha) / std::sqrt(n);
  r.alpha = alpha;
  r.n = v.size();
  r.pass = r.statistic <= r.threshold;
  return r;
}

GofReport ks_one_sample(const EmpiricalSample& sample, const TabulatedCdf& cdf, double alpha) {
  return ks_one_sample(sample, [&cdf](double x) { return cdf(x); }, alpha);
}

GofReport ks_two_sample(const EmpiricalSample& first, const EmpiricalSample& second, double alpha) {
  const auto& x = first.values();
  const auto& y = second.values();
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double z = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == z) ++i;
    while (j < y.size() && y[j] == z) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  GofReport r;
  r.test = "ks-two-sample";
  r.statistic = d;
  r.threshold = kolmogorov_critical_value(alpha) * std::sqrt((n + m) / (n * m));
  r.alpha = alpha;
  r.n = x.size() + y.size();
  r.pass = r.statistic <= r.threshold;
  return r;
}

GofReport chi_square_region(const std::vector<std::pair<double, double>>& points,
                            const std::function<double(double, double)>& pdf, double alpha, int s_bins,
                            int r_bins) {
  if (s_bins < 1 || r_bins < 1) throw std::invalid_argument("chi_square_region: bin counts must be positive");
  const std::size_t bins = static_cast<std::size_t>(s_bins) * static_cast<std::size_t>(r_bins);
  std::vector<double> observed(bins, 0.0), expected(bins, 0.0);
  const double n = static_cast<double>(points.size());
  for (const auto& [a, b] : points) {
    const double s = a + b;
    if (!(a > 0.0 && b > 0.0 && s < kPi)) throw DomainError("chi_square_region: point outside the angle simplex");
    const int i = std::min(s_bins - 1, static_cast<int>(s / kPi * s_bins));
    const int j = std::min(r_bins - 1, static_cast<int>(a / s * r_bins));
    observed[static_cast<std::size_t>(i) * r_bins + j] += 1.0;
  }
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  spec.rel_tol = 1e-9;
  for (int i = 0; i < s_bins; ++i) {
    for (int j = 0; j < r_bins; ++j) {
      const Region2d cell = Region2d::rectangle(kPi * i / s_bins, kPi * (i + 1) / s_bins,
                                                static_cast<double>(j) / r_bins, static_cast<double>(j + 1) / r_bins);
      const IntegralResult mass =
          integrate_2d([&](double s, double r) { return s * pdf(s * r, s * (1.0 - r)); }, cell, spec);
      expected[static_cast<std::size_t>(i) * r_bins + j] = n * mass.value;
    }
  }
  // merge in grid order
  std::vector<std::pair<double, double>> groups;
  double o = 0.0, e = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    o += observed[k];
    e += expected[k];
    if (e >= 5.0) {
      groups.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (groups.empty()) throw std::invalid_argument("chi_square_region: total expected count below 5");
    groups.back().first += o;
    groups.back().second += e;
  }
  if (groups.size() < 2) throw std::invalid_argument("chi_square_region: fewer than 2 bins after merging");
  double stat = 0.0;
  for (const auto& [obs, exp] : groups) stat += (obs - exp) * (obs - exp) / exp;
  const boost::math::chi_squared dist(static_cast<double>(groups.size() - 1));
  GofReport r;
  r.test = "chi-square";
  r.statistic = stat;
  r.threshold = boost::math::quantile(boost::math::complement(dist, alpha));
  r.alpha = alpha;
  r.n = points.size();
  r.pass = r.statistic <= r.threshold;
  return r;
}

}  // namespace poistri
