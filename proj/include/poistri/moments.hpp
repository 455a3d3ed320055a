#ifndef POISTRI_MOMENTS_HPP
#define POISTRI_MOMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poistri/sampler.hpp"

namespace poistri {

enum class Quantity {
  alpha,
  beta,
  gamma,
  alpha_beta,
  beta_gamma,
  gamma_alpha,
  a,
  b,
  c,
  ab,
  bc,
  ca,
  a_over_b,
  b_over_a,
  b_over_c,
  c_over_b,
  c_over_a,
  a_over_c,
  area,
};

enum class Statistic { mean, mean_square };

std::string_view to_string(Quantity q) noexcept;
std::string_view to_string(Statistic s) noexcept;
std::optional<Quantity> parse_quantity(std::string_view name) noexcept;

struct MomentTarget {
  Family family = Family::pinned;
  Quantity quantity = Quantity::alpha;
  Statistic statistic = Statistic::mean;
};

// Label such as "pinned/c/mean".
std::string label(const MomentTarget& target);

// Every (quantity, statistic) cell of the family's moment table, row by row.
// Families other than pinned, staked and anchored have no table.
std::vector<MomentTarget> table_targets(Family family);

struct ClosedForm {
  enum class Kind { value, infinite, unavailable };
  Kind kind = Kind::unavailable;
  double value = 0.0;
  // Published decimal for cells without an exact expression.
  std::optional<double> reference;
  std::string expression;
};

// Throws std::invalid_argument for a target outside the tables.
ClosedForm closed_form(const MomentTarget& target);

struct Estimate {
  double value = 0.0;
  // Quadrature error bound, or Monte Carlo standard error.
  double error = 0.0;
};

// Integrates against the density catalog. Throws DivergentError for infinite
// cells, std::invalid_argument for cells with no table entry, QuadratureError
// on non-convergence.
Estimate by_quadrature(const MomentTarget& target, double tol = 1e-10);

// Monte Carlo settings. The n draws are split into kBatches equal batches;
// batch i reads RandomStream(seed, stream_id).substream(i).
struct McOptions {
  std::size_t n = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  unsigned workers = 1;
};

inline constexpr std::size_t kBatches = 100;

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t n = 0;
  // Set for cells whose true value is infinite: the estimate does not settle.
  bool divergent = false;
};

McEstimate by_monte_carlo(const MomentTarget& target, const McOptions& options);

// All cells of a family's table from one shared set of draws, in table_targets order.
std::vector<McEstimate> monte_carlo_table(Family family, const McOptions& options);

struct MomentReport {
  MomentTarget target;
  ClosedForm closed;
  std::optional<Estimate> quadrature;
  std::optional<McEstimate> monte_carlo;
  bool pass = false;
};

// Closed form vs quadrature within quadrature_tol, closed form (or quadrature
// when no closed form exists) vs Monte Carlo within 3 standard errors.
// Cells without closed form compare quadrature to the published decimal.
MomentReport compare(const MomentTarget& target, const ClosedForm& closed, std::optional<Estimate> quadrature,
                     std::optional<McEstimate> monte_carlo, double quadrature_tol = 1e-6);

// Every cell of a family's table: closed form, quadrature (skipped for
// infinite and "-" cells) and Monte Carlo from one shared pass, compared.
std::vector<MomentReport> moment_table(Family family, const McOptions& options, double tol = 1e-10);

// rho(a, b) for pinned triangles.
double correlation_ab_closed_form() noexcept;
McEstimate correlation_ab_monte_carlo(const McOptions& options);

enum class AcutenessMethod { closed, quadrature, monte_carlo };

// P(acute) for pinned, staked or anchored triangles. Monte Carlo uses `options`.
McEstimate acuteness(Family family, AcutenessMethod method, const McOptions& options = {});

// Pinned P(alpha > pi/2), P(beta > pi/2), P(gamma > pi/2) from the angle marginals.
struct ObtusenessParts {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};
ObtusenessParts pinned_obtuseness_parts(double tol = 1e-12);

// E(ac) for pinned triangles as the sum of the two triple-integral branches
// (a < 2c and a > 2c), each integrated with b outermost.
struct ExpectedAc {
  double value = 0.0;
  double error = 0.0;
  double first_branch = 0.0;
  double second_branch = 0.0;
};
ExpectedAc expected_ac(double tol = 1e-9);

// int_1^M x^2 p(x) dx for the b/c ratio density p(x) = 2/x^3.
Estimate truncated_second_moment_b_over_c(double m, double tol = 1e-12);

}  // namespace poistri

#endif  // POISTRI_MOMENTS_HPP
