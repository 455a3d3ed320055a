#ifndef POISTRI_DENSITY_HPP
#define POISTRI_DENSITY_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace poistri {

// Every closed-form density in the catalog. The `pinned_*`, `ratio_*` and
// `pair_*` kinds describe pinned triangles; `uT_*` the uniform triangle whose
// base angles come from two folded Uniform[0, pi] variables.
enum class DensityKind {
  pinned_sides_joint,
  pinned_a,
  pinned_b,
  pinned_c,
  pinned_angles_joint,
  pinned_alpha,
  pinned_beta,
  pinned_gamma,
  ratio_a_over_b,
  ratio_b_over_a,
  ratio_b_over_c,
  ratio_c_over_b,
  ratio_c_over_a,
  ratio_a_over_c,
  pair_ab,
  pair_bc,
  pair_ac_integral,
  staked_angles_joint,
  anchored_angles_joint,
  uT_sides_joint,
  uT_side_a,
  uT_ratio,
  uT_max,
  uT_min,
};

inline constexpr std::array<DensityKind, 24> kAllDensityKinds = {
    DensityKind::pinned_sides_joint, DensityKind::pinned_a,        DensityKind::pinned_b,
    DensityKind::pinned_c,           DensityKind::pinned_angles_joint, DensityKind::pinned_alpha,
    DensityKind::pinned_beta,        DensityKind::pinned_gamma,    DensityKind::ratio_a_over_b,
    DensityKind::ratio_b_over_a,     DensityKind::ratio_b_over_c,  DensityKind::ratio_c_over_b,
    DensityKind::ratio_c_over_a,     DensityKind::ratio_a_over_c,  DensityKind::pair_ab,
    DensityKind::pair_bc,            DensityKind::pair_ac_integral, DensityKind::staked_angles_joint,
    DensityKind::anchored_angles_joint, DensityKind::uT_sides_joint, DensityKind::uT_side_a,
    DensityKind::uT_ratio,           DensityKind::uT_max,          DensityKind::uT_min,
};

std::string_view to_string(DensityKind kind) noexcept;
std::optional<DensityKind> parse_density_kind(std::string_view name) noexcept;

struct Support {
  int dimension;
  std::string_view description;
  // Bounding interval of the first coordinate (the whole support when dimension == 1).
  double lower;
  double upper;
};

const Support& support(DensityKind kind) noexcept;

// A density value, or the tagged infinity at an integrable singularity on or
// inside the support (Delta = 0 edges, the log singularity at a = 1).
struct DensityValue {
  double value = 0.0;
  bool singular = false;

  static DensityValue finite(double v) noexcept { return {v, false}; }
  static DensityValue infinite() noexcept;
};

// Dispatch by kind. `args.size()` must equal support(kind).dimension.
// `tol` only affects pair_ac_integral.
DensityValue evaluate(DensityKind kind, std::span<const double> args, double tol = 1e-10);

enum class Side { a, b, c };
enum class Angle { alpha, beta, gamma };
enum class Ratio { a_over_b, b_over_a, b_over_c, c_over_b, c_over_a, a_over_c };
enum class Pair { ab, bc };
enum class UniformTKind { sides_joint, side_a, ratio, max, min };

// 8 pi xyz / sqrt(Delta) exp(-pi y^2) for the pinned sides (a, b, c) = (x, y, z).
DensityValue pdf_pinned_sides_joint(double x, double y, double z) noexcept;
double pdf_pinned_side(Side which, double x) noexcept;
double pdf_pinned_angles_joint(double alpha, double beta) noexcept;
double pdf_pinned_angle(Angle which, double x) noexcept;
double pdf_ratio(Ratio kind, double x) noexcept;
// ab: (s, t) = (a, b); bc: (s, t) = (b, c).
double pdf_pair(Pair kind, double s, double t) noexcept;
// Joint density of (a, c) for pinned triangles. No closed form; the b-integral
// is evaluated by quadrature to absolute accuracy `tol`.
double pdf_pair_ac(double a, double c, double tol = 1e-10);
double pdf_staked_angles_joint(double alpha, double beta) noexcept;
double pdf_anchored_angles_joint(double alpha, double beta) noexcept;
DensityValue pdf_uniform_t(UniformTKind kind, std::span<const double> args);

// Univariate angle marginals of the staked and anchored joints, by quadrature.
double staked_angle_marginal(Angle which, double x, double tol = 1e-11);
double anchored_angle_marginal(double x, double tol = 1e-11);

}  // namespace poistri

#endif  // POISTRI_DENSITY_HPP
