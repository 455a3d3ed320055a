#ifndef POISTRI_GOF_HPP
#define POISTRI_GOF_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "poistri/density.hpp"
#include "poistri/sampler.hpp"

namespace poistri {

class EmpiricalSample {
 public:
  // Sorts the values. Throws std::invalid_argument if fewer than 2 or any is NaN.
  EmpiricalSample(std::vector<double> values, std::string label = {});

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<double> values_;
  std::string label_;
};

struct GofReport {
  std::string test;  // "ks-one-sample", "ks-two-sample" or "chi-square"
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  bool pass = false;
};

// A univariate law given by its density on (lower, upper). Breakpoints mark
// kinks and integrable singularities inside the support; `scale` sets where
// the half-line map x = lower + scale t/(1-t) puts its resolution.
struct UnivariateLaw {
  std::string name;
  std::function<double(double)> pdf;
  double lower = 0.0;
  double upper = 1.0;
  std::vector<double> breakpoints;
  double scale = 1.0;
};

// The univariate catalog densities. Throws std::invalid_argument for joint kinds.
UnivariateLaw law_for(DensityKind kind);
// Angle marginals of the staked and anchored joints (alpha or beta; anchored is symmetric).
UnivariateLaw staked_angle_law(Angle which);
UnivariateLaw anchored_angle_law();

// A scalar statistic of a sampled triangle paired with the catalog law it should
// follow. Joint kinds map to their first coordinate (a, alpha, ...) and its marginal.
struct SampledStatistic {
  Family family;
  std::string name;
  double (*value)(const TriangleSample&);
  UnivariateLaw law;
};
SampledStatistic statistic_for(DensityKind kind);

// P(X <= x) by direct quadrature of the density.
double cdf_from_pdf(const UnivariateLaw& law, double x, double tol = 1e-10);
double cdf_from_pdf(DensityKind kind, double x, double tol = 1e-10);

// CDF tabulated at the nodes of a uniform grid in the mapped variable t, with
// linear interpolation in t between nodes (monotone by construction).
class TabulatedCdf {
 public:
  explicit TabulatedCdf(const UnivariateLaw& law, std::size_t cells = 4096, double tol = 1e-12);

  // Linear interpolant between the tabulated nodes.
  double operator()(double x) const;
  // Node value plus a quadrature over the partial cell.
  double exact(double x) const;
  // Root of exact(x) = p inside the bracketing cell. p in [0, 1].
  double quantile(double p) const;
  // Integral of the density over the whole support (1 up to quadrature error).
  double total() const noexcept { return cdf_.back(); }
  const std::string& name() const noexcept { return name_; }

 private:
  double to_t(double x) const;
  double to_x(double t) const;

  std::string name_;
  std::function<double(double)> pdf_;
  double tol_;
  double lower_;
  double upper_;
  double scale_;
  std::vector<double> t_;
  std::vector<double> cdf_;
};

// Asymptotic Kolmogorov critical value: P(sup|B| > c) = alpha for the Brownian bridge.
double kolmogorov_critical_value(double alpha);

GofReport ks_one_sample(const EmpiricalSample& sample, const std::function<double(double)>& cdf, double alpha);
GofReport ks_one_sample(const EmpiricalSample& sample, const TabulatedCdf& cdf, double alpha);
GofReport ks_two_sample(const EmpiricalSample& first, const EmpiricalSample& second, double alpha);

// Pearson test for angle pairs (alpha, beta) on {alpha, beta > 0, alpha + beta < pi}.
// Bins are a grid in (s, r) = (alpha + beta, alpha / (alpha + beta)) over
// (0, pi) x (0, 1); expected counts integrate the density with Jacobian s.
// Bins are merged in grid order until each expected count is at least 5.
GofReport chi_square_region(const std::vector<std::pair<double, double>>& points,
                            const std::function<double(double, double)>& pdf, double alpha, int s_bins = 12,
                            int r_bins = 12);

}  // namespace poistri

#endif  // POISTRI_GOF_HPP
