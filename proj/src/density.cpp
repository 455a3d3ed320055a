#include "poistri/density.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "poistri/errors.hpp"
#include "poistri/geom.hpp"
#include "poistri/numerics.hpp"

namespace poistri {

namespace {

struct KindInfo {
  DensityKind kind;
  std::string_view name;
  Support support;
};

constexpr double kHalfPi = 0.5 * kPi;

const std::array<KindInfo, 24>& catalog() {
  static const std::array<KindInfo, 24> table = {{
      {DensityKind::pinned_sides_joint, "pinned_sides_joint", {3, "y-z < x < y+z, y > z, z > 0", 0.0, kInf}},
      {DensityKind::pinned_a, "pinned_a", {1, "x > 0", 0.0, kInf}},
      {DensityKind::pinned_b, "pinned_b", {1, "x > 0", 0.0, kInf}},
      {DensityKind::pinned_c, "pinned_c", {1, "x > 0", 0.0, kInf}},
      {DensityKind::pinned_angles_joint, "pinned_angles_joint", {2, "0 < alpha < pi, (pi-alpha)/2 < beta < pi-alpha", 0.0, kPi}},
      {DensityKind::pinned_alpha, "pinned_alpha", {1, "0 < x < pi", 0.0, kPi}},
      {DensityKind::pinned_beta, "pinned_beta", {1, "0 < x < pi", 0.0, kPi}},
      {DensityKind::pinned_gamma, "pinned_gamma", {1, "0 < x < pi/2", 0.0, kHalfPi}},
      {DensityKind::ratio_a_over_b, "ratio_a_over_b", {1, "0 < x < 2", 0.0, 2.0}},
      {DensityKind::ratio_b_over_a, "ratio_b_over_a", {1, "x > 1/2", 0.5, kInf}},
      {DensityKind::ratio_b_over_c, "ratio_b_over_c", {1, "x > 1", 1.0, kInf}},
      {DensityKind::ratio_c_over_b, "ratio_c_over_b", {1, "0 < x < 1", 0.0, 1.0}},
      {DensityKind::ratio_c_over_a, "ratio_c_over_a", {1, "x > 0", 0.0, kInf}},
      {DensityKind::ratio_a_over_c, "ratio_a_over_c", {1, "x > 0", 0.0, kInf}},
      {DensityKind::pair_ab, "pair_ab", {2, "0 < a < 2b", 0.0, kInf}},
      {DensityKind::pair_bc, "pair_bc", {2, "0 < c < b", 0.0, kInf}},
      {DensityKind::pair_ac_integral, "pair_ac_integral", {2, "a > 0, c > 0", 0.0, kInf}},
      {DensityKind::staked_angles_joint, "staked_angles_joint", {2, "alpha > 0, beta > 0, alpha+beta < pi", 0.0, kPi}},
      {DensityKind::anchored_angles_joint, "anchored_angles_joint", {2, "alpha > 0, beta > 0, alpha+beta < pi", 0.0, kPi}},
      {DensityKind::uT_sides_joint, "uT_sides_joint", {2, "|1-a| < b < 1+a, a > 0", 0.0, kInf}},
      {DensityKind::uT_side_a, "uT_side_a", {1, "a > 0 (log singularity at a = 1)", 0.0, kInf}},
      {DensityKind::uT_ratio, "uT_ratio", {1, "z > 0 (log singularity at z = 1)", 0.0, kInf}},
      {DensityKind::uT_max, "uT_max", {1, "x > 1/2 (log singularity at x = 1)", 0.5, kInf}},
      {DensityKind::uT_min, "uT_min", {1, "y > 0", 0.0, kInf}},
  }};
  return table;
}

const KindInfo& info(DensityKind kind) { return catalog()[static_cast<std::size_t>(kind)]; }

// Taylor coefficients about x = 1 of the second c/a branch and the first a/c
// branch. Both closed forms are 0/0 at x = 1 (triple zero over (x^2-1)^3).
constexpr std::array<double, 24> kRatioCOverASeries = {
    0.27566444771089602476,  -0.6432170446587573911, 1.1087836674593817885,  -1.758126588733936869,
    2.7432745083046398936,   -4.318337863567543165,  6.9202742450858243756,  -11.317594861739415175,
    18.879985451511664526,   -32.070029024929340708, 55.345527310295957723,  -96.823334584545833649,
    171.35979264310640087,   -306.27423223233065954, 552.01782053092840414,  -1002.1199936658399983,
    1830.5828216932643602,   -3362.164325909961368,  6204.7895584192839701,  -11499.5568869661077,
    21393.744804218440887,   -39937.445695006321655, 74786.276000939625291,  -140440.26300351165587};
constexpr std::array<double, 24> kRatioAOverCSeries = {
    0.27566444771089602476,   0.091888149236965341585,   0.006125876615797689439,  0.079636396005369962707,
    -0.013369968804320353934, 0.049185279177105786898,   -0.0042351739566008717109, 0.027226118292434175285,
    0.0027563334524290923728, 0.015475205738314925054,   0.005388746259015670313,  0.0097591431193190225183,
    0.0057320484356316567708, 0.0069300025087501932575,  0.0052553269514567127028, 0.0053896453212197931344,
    0.0046043087647155308679, 0.0044360233352057404222,  0.0039974483127248694317, 0.0037744634390220429247,
    0.0034852499382956142826, 0.0032780609353352477512,  0.0030642873234375521568, 0.0028871947013099661999};
constexpr double kSeriesRadius = 0.05;

double horner(const std::array<double, 24>& coefficients, double h) {
  double sum = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) sum = sum * h + *it;
  return sum;
}

// ln(1+x) - ln|1-x|, singular at x = 1.
double log_ratio_one(double x) {
  if (x < 1.0) return std::log1p(x) - std::log1p(-x);
  return std::log1p(x) - std::log(x - 1.0);
}

constexpr double kTwoOverPiSquared = 2.0 / (kPi * kPi);

}  // namespace

DensityValue DensityValue::infinite() noexcept { return {kInf, true}; }

std::string_view to_string(DensityKind kind) noexcept { return info(kind).name; }

std::optional<DensityKind> parse_density_kind(std::string_view name) noexcept {
  for (const auto& entry : catalog())
    if (entry.name == name) return entry.kind;
  return std::nullopt;
}

const Support& support(DensityKind kind) noexcept { return info(kind).support; }

DensityValue pdf_pinned_sides_joint(double x, double y, double z) noexcept {
  if (!(z > 0.0 && y > z)) return {};
  if (x == y - z || x == y + z) return DensityValue::infinite();
  if (!(x > y - z && x < y + z)) return {};
  const double delta = heron_product(x, y, z);
  if (!(delta > 0.0)) return DensityValue::infinite();
  return DensityValue::finite(8.0 * kPi * x * y * z / std::sqrt(delta) * std::exp(-kPi * y * y));
}

double pdf_pinned_side(Side which, double x) noexcept {
  if (!(x > 0.0)) return 0.0;
  switch (which) {
    case Side::a: return kPi * x * erfc(std::sqrt(kPi) * x / 2.0);
    case Side::b: return 2.0 * kPi * kPi * x * x * x * std::exp(-kPi * x * x);
    case Side::c: return 2.0 * kPi * x * std::exp(-kPi * x * x);
  }
  return 0.0;
}

double pdf_pinned_angles_joint(double alpha, double beta) noexcept {
  if (!(alpha > 0.0 && alpha < kPi)) return 0.0;
  if (!(beta > 0.5 * (kPi - alpha) && beta < kPi - alpha)) return 0.0;
  const double s = std::sin(beta);
  return (2.0 / kPi) * std::sin(alpha) * std::sin(alpha + beta) / (s * s * s);
}

double pdf_pinned_angle(Angle which, double x) noexcept {
  switch (which) {
    case Angle::alpha:
      return (x > 0.0 && x < kPi) ? 1.0 / kPi : 0.0;
    case Angle::beta: {
      if (!(x > 0.0 && x < kPi)) return 0.0;
      if (x <= kHalfPi) {
        // 1/(2pi) + (1 - 3cos^2)/(2pi sin^2) + x cos/(pi sin^3)
        //   = 1/(2pi) + (3 sin^3 x - 2 (sin x - x cos x)) / (2 pi sin^3 x)
        const double s = std::sin(x);
        return 0.5 / kPi + (3.0 * s * s * s - 2.0 * sin_minus_x_cos(x)) / (2.0 * kPi * s * s * s);
      }
      // 1/(pi sin^2) + (pi - x) cos/(pi sin^3) with e = pi - x:
      //   (sin e - e cos e) / (pi sin^3 e)
      const double e = kPi - x;
      const double s = std::sin(e);
      return sin_minus_x_cos(e) / (kPi * s * s * s);
    }
    case Angle::gamma: {
      if (!(x >= 0.0 && x < kHalfPi)) return 0.0;
      const double c = std::cos(x);
      return (4.0 / kPi) * c * c;
    }
  }
  return 0.0;
}

double pdf_ratio(Ratio kind, double x) noexcept {
  switch (kind) {
    case Ratio::a_over_b:
      return (x > 0.0 && x < 2.0) ? (2.0 * x / kPi) * std::acos(x / 2.0) : 0.0;
    case Ratio::b_over_a:
      // 1/x^3 - 2 asin(1/(2x))/(pi x^3) == 2 acos(1/(2x))/(pi x^3)
      return x > 0.5 ? 2.0 * std::acos(0.5 / x) / (kPi * x * x * x) : 0.0;
    case Ratio::b_over_c:
      return x > 1.0 ? 2.0 / (x * x * x) : 0.0;
    case Ratio::c_over_b:
      return (x > 0.0 && x < 1.0) ? 2.0 * x : 0.0;
    case Ratio::c_over_a: {
      if (!(x > 0.0)) return 0.0;
      const double x2 = x * x;
      if (x <= 0.5) {
        const double d = 1.0 - x2;
        return 2.0 * x * (1.0 + x2) / (d * d * d);
      }
      if (std::abs(x - 1.0) < kSeriesRadius) return horner(kRatioCOverASeries, x - 1.0);
      const double d = x2 - 1.0;
      const double numerator = 2.0 * d * std::sqrt(4.0 * x2 - 1.0) - kPi * x2 * (1.0 + x2) +
                               6.0 * x2 * (1.0 + x2) * std::asin(0.5 / x);
      return -numerator / (kPi * x * d * d * d);
    }
    case Ratio::a_over_c: {
      if (!(x > 0.0)) return 0.0;
      const double x2 = x * x;
      if (x >= 2.0) {
        const double d = x2 - 1.0;
        return 2.0 * x * (1.0 + x2) / (d * d * d);
      }
      if (std::abs(x - 1.0) < kSeriesRadius) return horner(kRatioAOverCSeries, x - 1.0);
      const double d = 1.0 - x2;
      const double numerator = 2.0 * x * d * std::sqrt(4.0 - x2) - kPi * (1.0 + x2) +
                               6.0 * (1.0 + x2) * std::asin(0.5 * x);
      return -x * numerator / (kPi * d * d * d);
    }
  }
  return 0.0;
}

double pdf_pair(Pair kind, double s, double t) noexcept {
  switch (kind) {
    case Pair::ab: {
      const double a = s, b = t;
      if (!(a > 0.0 && a < 2.0 * b)) return 0.0;
      return 4.0 * kPi * a * b * std::exp(-kPi * b * b) * std::acos(a / (2.0 * b));
    }
    case Pair::bc: {
      const double b = s, c = t;
      if (!(c > 0.0 && c < b)) return 0.0;
      return 4.0 * kPi * kPi * b * c * std::exp(-kPi * b * b);
    }
  }
  return 0.0;
}

double pdf_pair_ac(double a, double c, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("pdf_pair_ac: tol must be > 0");
  if (!(a > 0.0 && c > 0.0)) return 0.0;
  // f(a,c) = 8 pi a c int_L^{a+c} b e^{-pi b^2} / sqrt(((a+c)^2-b^2)(b^2-(a-c)^2)) db,
  // L = c if a < 2c else a - c. With b^2 = Q + (P-Q) sin^2 t, P = (a+c)^2,
  // Q = (a-c)^2, both square-root factors cancel against the Jacobian:
  //   f(a,c) = 8 pi a c int_{t0}^{pi/2} exp(-pi (Q + 4ac sin^2 t)) dt,
  // with sin^2 t0 = max(0, (2c - a) / (4c)).
  const double q = (a - c) * (a - c);
  const double four_ac = 4.0 * a * c;
  const double t0 = a < 2.0 * c ? std::asin(std::sqrt((2.0 * c - a) / (4.0 * c))) : 0.0;
  const double scale = 8.0 * kPi * a * c * std::exp(-kPi * q);
  if (scale == 0.0) return 0.0;
  QuadratureSpec spec;
  spec.abs_tol = tol / scale;
  spec.rel_tol = 1e-14;
  spec.max_subdivisions = 100;
  auto integrand = [&](double t) {
    const double s = std::sin(t);
    return std::exp(-kPi * four_ac * s * s);
  };
  const IntegralResult r = integrate_1d(integrand, t0, kHalfPi, spec);
  if (!r.converged)
    throw QuadratureError("pdf_pair_ac: b-integral did not converge", scale * r.value, scale * r.error);
  return scale * r.value;
}

namespace {

// Joints in terms of sin(alpha), sin(beta), sin(alpha + beta) (and sin(alpha - beta)).
double staked_from_sines(double sa, double sb, double s) noexcept {
  if (!(s > 0.0)) return 0.0;
  // |AC| = sin(beta) / sin(alpha + beta); the apex law is pi exp(-pi |AC|^2).
  const double ratio = sb / s;
  const double weight = std::exp(-kPi * ratio * ratio);
  if (weight == 0.0) return 0.0;
  return 2.0 * weight * sa * ratio / (s * s);
}

double anchored_from_sines(double sa, double sb, double sd, double s) noexcept {
  if (!(s > 0.0)) return 0.0;
  const double weight = std::exp(-0.25 * kPi * (sd * sd + 4.0 * sa * sa * sb * sb) / (s * s));
  if (weight == 0.0) return 0.0;
  return 2.0 * weight * (sa / s) * (sb / s) / s;
}

}  // namespace

double pdf_staked_angles_joint(double alpha, double beta) noexcept {
  if (!(alpha > 0.0 && beta > 0.0 && alpha + beta < kPi)) return 0.0;
  return staked_from_sines(std::sin(alpha), std::sin(beta), std::sin(alpha + beta));
}

double pdf_anchored_angles_joint(double alpha, double beta) noexcept {
  if (!(alpha > 0.0 && beta > 0.0 && alpha + beta < kPi)) return 0.0;
  return anchored_from_sines(std::sin(alpha), std::sin(beta), std::sin(alpha - beta), std::sin(alpha + beta));
}

DensityValue pdf_uniform_t(UniformTKind kind, std::span<const double> args) {
  const std::size_t want = kind == UniformTKind::sides_joint ? 2 : 1;
  if (args.size() != want) throw std::invalid_argument("pdf_uniform_t: wrong number of arguments");
  switch (kind) {
    case UniformTKind::sides_joint: {
      const double a = args[0], b = args[1];
      if (!(a > 0.0 && b > std::abs(1.0 - a) && b < 1.0 + a)) return {};
      return DensityValue::finite(kTwoOverPiSquared / (a * b));
    }
    case UniformTKind::side_a:
    case UniformTKind::ratio: {
      const double a = args[0];
      if (!(a > 0.0)) return {};
      if (a == 1.0) return DensityValue::infinite();
      return DensityValue::finite(kTwoOverPiSquared * log_ratio_one(a) / a);
    }
    case UniformTKind::max: {
      const double x = args[0];
      if (!(x > 0.5)) return {};
      if (x == 1.0) return DensityValue::infinite();
      return DensityValue::finite(2.0 * kTwoOverPiSquared * (std::log(x) - std::log(std::abs(1.0 - x))) / x);
    }
    case UniformTKind::min: {
      const double y = args[0];
      if (!(y > 0.0)) return {};
      const double logs = y < 0.5 ? std::log1p(y) - std::log1p(-y) : std::log1p(1.0 / y);
      return DensityValue::finite(2.0 * kTwoOverPiSquared * logs / y);
    }
  }
  return {};
}

double staked_angle_marginal(Angle which, double x, double tol) {
  if (!(x > 0.0 && x < kPi)) return 0.0;
  QuadratureSpec spec;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  spec.max_subdivisions = 400;
  const double d = kPi - x;
  const double sx = std::sin(d);
  // integrate over g = d - t, the complement of the free angle t; sin(t) = sin(x + g)
  const auto sin_free = [&](double g) { return g < d - kHalfPi ? std::sin(x + g) : std::sin(d - g); };
  switch (which) {
    case Angle::alpha:
      return integrate_or_throw([&](double g) { return staked_from_sines(sx, sin_free(g), std::sin(g)); }, 0.0, d,
                                spec);
    case Angle::beta:
      return integrate_or_throw([&](double g) { return staked_from_sines(sin_free(g), sx, std::sin(g)); }, 0.0, d,
                                spec);
    case Angle::gamma:
      return integrate_or_throw([&](double g) { return staked_from_sines(sin_free(g), std::sin(g), sx); }, 0.0, d,
                                spec);
  }
  return 0.0;
}

double anchored_angle_marginal(double x, double tol) {
  if (!(x > 0.0 && x < kPi)) return 0.0;
  QuadratureSpec spec;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  spec.max_subdivisions = 400;
  const double d = kPi - x;
  const double sx = std::sin(d);
  const auto sin_free = [&](double g) { return g < d - kHalfPi ? std::sin(x + g) : std::sin(d - g); };
  // beta = d - g, so alpha - beta = x + g - d
  return integrate_or_throw(
      [&](double g) { return anchored_from_sines(sx, sin_free(g), std::sin(x + g - d), std::sin(g)); }, 0.0, d,
      spec);
}

DensityValue evaluate(DensityKind kind, std::span<const double> args, double tol) {
  const Support& s = support(kind);
  if (args.size() != static_cast<std::size_t>(s.dimension))
    throw std::invalid_argument(std::string(to_string(kind)) + ": expected " + std::to_string(s.dimension) +
                                " argument(s)");
  using K = DensityKind;
  switch (kind) {
    case K::pinned_sides_joint: return pdf_pinned_sides_joint(args[0], args[1], args[2]);
    case K::pinned_a: return DensityValue::finite(pdf_pinned_side(Side::a, args[0]));
    case K::pinned_b: return DensityValue::finite(pdf_pinned_side(Side::b, args[0]));
    case K::pinned_c: return DensityValue::finite(pdf_pinned_side(Side::c, args[0]));
    case K::pinned_angles_joint: return DensityValue::finite(pdf_pinned_angles_joint(args[0], args[1]));
    case K::pinned_alpha: return DensityValue::finite(pdf_pinned_angle(Angle::alpha, args[0]));
    case K::pinned_beta: return DensityValue::finite(pdf_pinned_angle(Angle::beta, args[0]));
    case K::pinned_gamma: return DensityValue::finite(pdf_pinned_angle(Angle::gamma, args[0]));
    case K::ratio_a_over_b: return DensityValue::finite(pdf_ratio(Ratio::a_over_b, args[0]));
    case K::ratio_b_over_a: return DensityValue::finite(pdf_ratio(Ratio::b_over_a, args[0]));
    case K::ratio_b_over_c: return DensityValue::finite(pdf_ratio(Ratio::b_over_c, args[0]));
    case K::ratio_c_over_b: return DensityValue::finite(pdf_ratio(Ratio::c_over_b, args[0]));
    case K::ratio_c_over_a: return DensityValue::finite(pdf_ratio(Ratio::c_over_a, args[0]));
    case K::ratio_a_over_c: return DensityValue::finite(pdf_ratio(Ratio::a_over_c, args[0]));
    case K::pair_ab: return DensityValue::finite(pdf_pair(Pair::ab, args[0], args[1]));
    case K::pair_bc: return DensityValue::finite(pdf_pair(Pair::bc, args[0], args[1]));
    case K::pair_ac_integral: return DensityValue::finite(pdf_pair_ac(args[0], args[1], tol));
    case K::staked_angles_joint: return DensityValue::finite(pdf_staked_angles_joint(args[0], args[1]));
    case K::anchored_angles_joint: return DensityValue::finite(pdf_anchored_angles_joint(args[0], args[1]));
    case K::uT_sides_joint: return pdf_uniform_t(UniformTKind::sides_joint, args);
    case K::uT_side_a: return pdf_uniform_t(UniformTKind::side_a, args);
    case K::uT_ratio: return pdf_uniform_t(UniformTKind::ratio, args);
    case K::uT_max: return pdf_uniform_t(UniformTKind::max, args);
    case K::uT_min: return pdf_uniform_t(UniformTKind::min, args);
  }
  throw std::logic_error("evaluate: unknown density kind");
}

}  // namespace poistri
