#include "poistri/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "parallel.hpp"
#include "poistri/density.hpp"
#include "poistri/errors.hpp"
#include "poistri/geom.hpp"
#include "poistri/numerics.hpp"

namespace poistri {

namespace {

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kPi2 = kPi * kPi;

constexpr std::array<Quantity, 19> kAllQuantities = {
    Quantity::alpha,      Quantity::beta,     Quantity::gamma,    Quantity::alpha_beta, Quantity::beta_gamma,
    Quantity::gamma_alpha, Quantity::a,       Quantity::b,        Quantity::c,          Quantity::ab,
    Quantity::bc,         Quantity::ca,       Quantity::a_over_b, Quantity::b_over_a,   Quantity::b_over_c,
    Quantity::c_over_b,   Quantity::c_over_a, Quantity::a_over_c, Quantity::area,
};

double quantity_of(Quantity q, const TriangleSample& s) {
  const double a = s.triangle.a(), b = s.triangle.b(), c = s.triangle.c();
  const double al = s.angles.alpha(), be = s.angles.beta(), ga = s.angles.gamma();
  switch (q) {
    case Quantity::alpha: return al;
    case Quantity::beta: return be;
    case Quantity::gamma: return ga;
    case Quantity::alpha_beta: return al * be;
    case Quantity::beta_gamma: return be * ga;
    case Quantity::gamma_alpha: return ga * al;
    case Quantity::a: return a;
    case Quantity::b: return b;
    case Quantity::c: return c;
    case Quantity::ab: return a * b;
    case Quantity::bc: return b * c;
    case Quantity::ca: return c * a;
    case Quantity::a_over_b: return a / b;
    case Quantity::b_over_a: return b / a;
    case Quantity::b_over_c: return b / c;
    case Quantity::c_over_b: return c / b;
    case Quantity::c_over_a: return c / a;
    case Quantity::a_over_c: return a / c;
    case Quantity::area: return area(s.triangle);
  }
  return 0.0;
}

std::vector<Quantity> table_rows(Family family) {
  switch (family) {
    case Family::pinned: return {kAllQuantities.begin(), kAllQuantities.end()};
    case Family::staked:
    case Family::anchored: return {Quantity::alpha, Quantity::beta, Quantity::alpha_beta};
    case Family::uniform_t: break;
  }
  return {};
}

ClosedForm exact(double v, std::string expr) {
  ClosedForm f;
  f.kind = ClosedForm::Kind::value;
  f.value = v;
  f.expression = std::move(expr);
  return f;
}

ClosedForm infinite() {
  ClosedForm f;
  f.kind = ClosedForm::Kind::infinite;
  f.value = kInf;
  f.expression = "inf";
  return f;
}

ClosedForm numeric_only(double reference) {
  ClosedForm f;
  f.reference = reference;
  f.expression = "numeric";
  return f;
}

ClosedForm dash() {
  ClosedForm f;
  f.expression = "-";
  return f;
}

ClosedForm pinned_closed(Quantity q, Statistic s) {
  const double g = catalan_constant();
  const bool mean = s == Statistic::mean;
  switch (q) {
    case Quantity::alpha: return mean ? exact(kHalfPi, "pi/2") : exact(kPi2 / 3, "pi^2/3");
    case Quantity::beta: return mean ? exact(kPi / 4 + 1 / kPi, "pi/4+1/pi") : exact(1 + kPi2 / 12, "1+pi^2/12");
    case Quantity::gamma:
      return mean ? exact(kPi / 4 - 1 / kPi, "pi/4-1/pi") : exact(-0.5 + kPi2 / 12, "-1/2+pi^2/12");
    case Quantity::alpha_beta: return mean ? exact(0.25 + kPi2 / 12, "1/4+pi^2/12") : dash();
    case Quantity::beta_gamma:
    case Quantity::gamma_alpha: return mean ? exact(-0.25 + kPi2 / 12, "-1/4+pi^2/12") : dash();
    case Quantity::a: return mean ? exact(8 / (3 * kPi), "8/(3pi)") : exact(3 / kPi, "3/pi");
    case Quantity::b: return mean ? exact(0.75, "3/4") : exact(2 / kPi, "2/pi");
    case Quantity::c: return mean ? exact(0.5, "1/2") : exact(1 / kPi, "1/pi");
    case Quantity::ab: return mean ? exact(64 / (9 * kPi2), "64/(9pi^2)") : dash();
    case Quantity::bc: return mean ? exact(4 / (3 * kPi), "4/(3pi)") : dash();
    case Quantity::ca: return mean ? numeric_only(0.49181215) : dash();
    case Quantity::a_over_b: return mean ? exact(32 / (9 * kPi), "32/(9pi)") : exact(1.5, "3/2");
    case Quantity::b_over_a: return mean ? exact(4 / kPi, "4/pi") : infinite();
    case Quantity::b_over_c: return mean ? exact(2.0, "2") : infinite();
    case Quantity::c_over_b: return mean ? exact(2.0 / 3, "2/3") : exact(0.5, "1/2");
    case Quantity::c_over_a: return mean ? exact((1 + 2 * g) / kPi, "(1+2G)/pi") : infinite();
    case Quantity::a_over_c: return mean ? exact((5 + 2 * g) / kPi, "(5+2G)/pi") : infinite();
    case Quantity::area: return mean ? exact(4 / (3 * kPi2), "4/(3pi^2)") : exact(3 / (8 * kPi2), "3/(8pi^2)");
  }
  throw std::invalid_argument("closed_form: unknown quantity");
}

// 1-D moment of a catalog density, split at `breaks`.
Estimate moment_1d(const std::function<double(double)>& pdf, int power, double lo, double hi,
                   std::vector<double> breaks, double tol, std::optional<GaussianDecay> decay = {}) {
  std::vector<double> cuts{lo};
  cuts.insert(cuts.end(), breaks.begin(), breaks.end());
  cuts.push_back(hi);
  Estimate out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureSpec spec;
    spec.abs_tol = tol;
    spec.rel_tol = tol;
    spec.max_subdivisions = 2000;
    if (!std::isfinite(cuts[i + 1])) spec.decay = decay;
    const IntegralResult r = integrate_1d([&](double x) { return std::pow(x, power) * pdf(x); }, cuts[i],
                                          cuts[i + 1], spec);
    if (!r.converged) throw QuadratureError("moment quadrature did not converge", r.value, r.error);
    out.value += r.value;
    out.error += r.error;
  }
  return out;
}

Estimate from(const IntegralResult& r) {
  if (!r.converged) throw QuadratureError("moment quadrature did not converge", r.value, r.error);
  return {r.value, r.error};
}

QuadratureSpec spec_for(double tol, int subdivisions = 1000) {
  QuadratureSpec spec;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  spec.max_subdivisions = subdivisions;
  return spec;
}

Region2d pinned_angle_region() {
  Region2d r;
  r.x0 = 0.0;
  r.x1 = kPi;
  r.y_lower = [](double a) { return 0.5 * (kPi - a); };
  r.y_upper = [](double a) { return kPi - a; };
  return r;
}

// b outermost, c in (0, b), a in (b - c, b + c).
Estimate pinned_area_moment(int power, double tol) {
  auto b_slice = [&](double b) {
    Region2d r;
    r.x0 = 0.0;
    r.x1 = b;
    r.y_lower = [b](double c) { return b - c; };
    r.y_upper = [b](double c) { return b + c; };
    r.inner_singularity = EndpointSingularity::both;
    const IntegralResult inner = integrate_2d(
        [b, power](double c, double a) {
          const DensityValue f = pdf_pinned_sides_joint(a, b, c);
          if (f.singular) return 0.0;
          return f.value * std::pow(std::sqrt(std::max(0.0, heron_product(a, b, c))) / 4.0, power);
        },
        r, spec_for(0.1 * tol));
    return inner.value;
  };
  QuadratureSpec outer = spec_for(tol);
  outer.decay = GaussianDecay{kPi, 3 + 2 * power + 2};
  return from(integrate_1d(b_slice, 0.0, kInf, outer));
}

Estimate pinned_quadrature(Quantity q, Statistic s, double tol) {
  const int k = s == Statistic::mean ? 1 : 2;
  auto angle_pdf = [](Angle which) { return [which](double x) { return pdf_pinned_angle(which, x); }; };
  auto ratio_pdf = [](Ratio which) { return [which](double x) { return pdf_ratio(which, x); }; };
  auto side_pdf = [](Side which) { return [which](double x) { return pdf_pinned_side(which, x); }; };
  switch (q) {
    case Quantity::alpha: return moment_1d(angle_pdf(Angle::alpha), k, 0.0, kPi, {}, tol);
    case Quantity::beta: return moment_1d(angle_pdf(Angle::beta), k, 0.0, kPi, {kHalfPi}, tol);
    case Quantity::gamma: return moment_1d(angle_pdf(Angle::gamma), k, 0.0, kHalfPi, {}, tol);
    case Quantity::alpha_beta:
      return from(integrate_2d([](double a, double b) { return a * b * pdf_pinned_angles_joint(a, b); },
                               pinned_angle_region(), spec_for(tol)));
    case Quantity::beta_gamma:
      return from(integrate_2d(
          [](double a, double b) { return b * (kPi - a - b) * pdf_pinned_angles_joint(a, b); },
          pinned_angle_region(), spec_for(tol)));
    case Quantity::gamma_alpha:
      return from(integrate_2d(
          [](double a, double b) { return (kPi - a - b) * a * pdf_pinned_angles_joint(a, b); },
          pinned_angle_region(), spec_for(tol)));
    // erfc(sqrt(pi) x / 2) <= exp(-pi x^2 / 4)
    case Quantity::a: return moment_1d(side_pdf(Side::a), k, 0.0, kInf, {}, tol, GaussianDecay{kPi / 4, k + 1});
    case Quantity::b: return moment_1d(side_pdf(Side::b), k, 0.0, kInf, {}, tol, GaussianDecay{kPi, k + 3});
    case Quantity::c: return moment_1d(side_pdf(Side::c), k, 0.0, kInf, {}, tol, GaussianDecay{kPi, k + 1});
    case Quantity::ab:
    case Quantity::bc: {
      Region2d r;
      r.x0 = 0.0;
      r.x1 = kInf;
      r.outer_decay = GaussianDecay{kPi, 6};
      r.y_lower = [](double) { return 0.0; };
      if (q == Quantity::ab) {
        r.y_upper = [](double b) { return 2.0 * b; };
        return from(integrate_2d([](double b, double a) { return a * b * pdf_pair(Pair::ab, a, b); }, r,
                                 spec_for(tol)));
      }
      r.y_upper = [](double b) { return b; };
      return from(
          integrate_2d([](double b, double c) { return b * c * pdf_pair(Pair::bc, b, c); }, r, spec_for(tol)));
    }
    case Quantity::ca: {
      const ExpectedAc e = expected_ac(std::max(tol, 1e-10));
      return {e.value, e.error};
    }
    case Quantity::a_over_b: return moment_1d(ratio_pdf(Ratio::a_over_b), k, 0.0, 2.0, {}, tol);
    case Quantity::b_over_a: return moment_1d(ratio_pdf(Ratio::b_over_a), k, 0.5, kInf, {1.0}, tol);
    case Quantity::b_over_c: return moment_1d(ratio_pdf(Ratio::b_over_c), k, 1.0, kInf, {}, tol);
    case Quantity::c_over_b: return moment_1d(ratio_pdf(Ratio::c_over_b), k, 0.0, 1.0, {}, tol);
    case Quantity::c_over_a: return moment_1d(ratio_pdf(Ratio::c_over_a), k, 0.0, kInf, {0.5, 1.0, 2.0}, tol);
    case Quantity::a_over_c: return moment_1d(ratio_pdf(Ratio::a_over_c), k, 0.0, kInf, {0.5, 1.0, 2.0}, tol);
    case Quantity::area: return pinned_area_moment(k, tol);
  }
  throw std::invalid_argument("by_quadrature: unknown quantity");
}

Estimate joint_angle_quadrature(double (*joint)(double, double), Quantity q, Statistic s, double tol) {
  const int k = s == Statistic::mean ? 1 : 2;
  std::function<double(double, double)> f;
  switch (q) {
    case Quantity::alpha: f = [&](double a, double b) { return std::pow(a, k) * joint(a, b); }; break;
    case Quantity::beta: f = [&](double a, double b) { return std::pow(b, k) * joint(a, b); }; break;
    case Quantity::alpha_beta: f = [&](double a, double b) { return a * b * joint(a, b); }; break;
    default: throw std::invalid_argument("by_quadrature: no table entry");
  }
  return from(integrate_2d(f, Region2d::simplex(kPi), spec_for(tol)));
}

}  // namespace

std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::alpha: return "alpha";
    case Quantity::beta: return "beta";
    case Quantity::gamma: return "gamma";
    case Quantity::alpha_beta: return "alpha*beta";
    case Quantity::beta_gamma: return "beta*gamma";
    case Quantity::gamma_alpha: return "gamma*alpha";
    case Quantity::a: return "a";
    case Quantity::b: return "b";
    case Quantity::c: return "c";
    case Quantity::ab: return "a*b";
    case Quantity::bc: return "b*c";
    case Quantity::ca: return "c*a";
    case Quantity::a_over_b: return "a/b";
    case Quantity::b_over_a: return "b/a";
    case Quantity::b_over_c: return "b/c";
    case Quantity::c_over_b: return "c/b";
    case Quantity::c_over_a: return "c/a";
    case Quantity::a_over_c: return "a/c";
    case Quantity::area: return "area";
  }
  return "unknown";
}

std::string_view to_string(Statistic s) noexcept { return s == Statistic::mean ? "mean" : "mean_square"; }

std::optional<Quantity> parse_quantity(std::string_view name) noexcept {
  for (Quantity q : kAllQuantities)
    if (name == to_string(q)) return q;
  return std::nullopt;
}

std::string label(const MomentTarget& t) {
  std::string out(to_string(t.family));
  out += '/';
  out += to_string(t.quantity);
  out += '/';
  out += to_string(t.statistic);
  return out;
}

std::vector<MomentTarget> table_targets(Family family) {
  std::vector<MomentTarget> out;
  for (Quantity q : table_rows(family))
    for (Statistic s : {Statistic::mean, Statistic::mean_square}) out.push_back({family, q, s});
  return out;
}

ClosedForm closed_form(const MomentTarget& t) {
  const bool mean = t.statistic == Statistic::mean;
  switch (t.family) {
    case Family::pinned: return pinned_closed(t.quantity, t.statistic);
    case Family::staked:
      switch (t.quantity) {
        case Quantity::alpha: return mean ? exact(kHalfPi, "pi/2") : exact(kPi2 / 3, "pi^2/3");
        case Quantity::beta: return numeric_only(mean ? 0.34306160 : 0.20825399);
        case Quantity::alpha_beta: return mean ? numeric_only(0.43825535) : dash();
        default: break;
      }
      break;
    case Family::anchored:
      switch (t.quantity) {
        case Quantity::alpha:
        case Quantity::beta: return numeric_only(mean ? 0.71706372 : 0.92490176);
        case Quantity::alpha_beta: return mean ? numeric_only(0.39837926) : dash();
        default: break;
      }
      break;
    case Family::uniform_t: break;
  }
  throw std::invalid_argument("closed_form: " + label(t) + " is not a table cell");
}

Estimate by_quadrature(const MomentTarget& t, double tol) {
  const ClosedForm f = closed_form(t);
  if (f.kind == ClosedForm::Kind::infinite) throw DivergentError(label(t) + " diverges");
  if (f.expression == "-") throw std::invalid_argument(label(t) + " has no table entry");
  switch (t.family) {
    case Family::pinned: return pinned_quadrature(t.quantity, t.statistic, tol);
    case Family::staked: return joint_angle_quadrature(&pdf_staked_angles_joint, t.quantity, t.statistic, tol);
    case Family::anchored: return joint_angle_quadrature(&pdf_anchored_angles_joint, t.quantity, t.statistic, tol);
    case Family::uniform_t: break;
  }
  throw std::invalid_argument("by_quadrature: no table for family");
}

namespace {

// Per-batch sums of `width` accumulators; batch i draws from substream i.
struct BatchSums {
  std::vector<std::vector<double>> sums;
  std::vector<std::size_t> sizes;
};

BatchSums run_batches(Family family, const McOptions& options, std::size_t width,
                      const std::function<void(const TriangleSample&, double*)>& accumulate) {
  if (options.n < kBatches) throw std::invalid_argument("monte carlo: n must be at least 100");
  BatchSums out;
  out.sums.assign(kBatches, std::vector<double>(width, 0.0));
  out.sizes.resize(kBatches);
  const RandomStream base(options.seed, options.stream_id);
  const SamplerFn draw = sampler_for(family);
  detail::parallel_for(kBatches, options.workers, [&](std::size_t i) {
    const std::size_t count = options.n / kBatches + (i < options.n % kBatches ? 1 : 0);
    RandomStream rng = base.substream(i);
    double* acc = out.sums[i].data();
    for (std::size_t j = 0; j < count; ++j) accumulate(draw(rng, nullptr), acc);
    out.sizes[i] = count;
  });
  return out;
}

// Mean of column `k` with batch-means standard error.
McEstimate batch_estimate(const BatchSums& b, std::size_t k) {
  double total = 0.0;
  std::size_t n = 0;
  std::vector<double> means(kBatches);
  for (std::size_t i = 0; i < kBatches; ++i) {
    total += b.sums[i][k];
    n += b.sizes[i];
    means[i] = b.sums[i][k] / static_cast<double>(b.sizes[i]);
  }
  double mean_of_means = 0.0;
  for (double m : means) mean_of_means += m;
  mean_of_means /= kBatches;
  double ss = 0.0;
  for (double m : means) ss += (m - mean_of_means) * (m - mean_of_means);
  McEstimate e;
  e.value = total / static_cast<double>(n);
  e.standard_error = std::sqrt(ss / (kBatches - 1) / kBatches);
  e.n = n;
  return e;
}

}  // namespace

std::vector<McEstimate> monte_carlo_table(Family family, const McOptions& options) {
  const std::vector<MomentTarget> targets = table_targets(family);
  if (targets.empty()) throw std::invalid_argument("monte_carlo_table: family has no moment table");
  const BatchSums sums = run_batches(family, options, targets.size(), [&](const TriangleSample& s, double* acc) {
    for (std::size_t k = 0; k < targets.size(); k += 2) {
      const double v = quantity_of(targets[k].quantity, s);
      acc[k] += v;
      acc[k + 1] += v * v;
    }
  });
  std::vector<McEstimate> out;
  out.reserve(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    McEstimate e = batch_estimate(sums, k);
    e.divergent = closed_form(targets[k]).kind == ClosedForm::Kind::infinite;
    out.push_back(e);
  }
  return out;
}

McEstimate by_monte_carlo(const MomentTarget& t, const McOptions& options) {
  const ClosedForm f = closed_form(t);
  const BatchSums sums = run_batches(t.family, options, 1, [&](const TriangleSample& s, double* acc) {
    const double v = quantity_of(t.quantity, s);
    acc[0] += t.statistic == Statistic::mean ? v : v * v;
  });
  McEstimate e = batch_estimate(sums, 0);
  e.divergent = f.kind == ClosedForm::Kind::infinite;
  return e;
}

MomentReport compare(const MomentTarget& target, const ClosedForm& closed, std::optional<Estimate> quadrature,
                     std::optional<McEstimate> monte_carlo, double quadrature_tol) {
  MomentReport r{target, closed, quadrature, monte_carlo, true};
  switch (closed.kind) {
    case ClosedForm::Kind::infinite:
      r.pass = !quadrature && (!monte_carlo || monte_carlo->divergent);
      return r;
    case ClosedForm::Kind::value:
      if (quadrature) r.pass = r.pass && std::abs(quadrature->value - closed.value) <= quadrature_tol;
      if (monte_carlo)
        r.pass = r.pass && std::abs(monte_carlo->value - closed.value) <= 3.0 * monte_carlo->standard_error;
      return r;
    case ClosedForm::Kind::unavailable:
      if (closed.reference && quadrature)
        r.pass = r.pass && std::abs(quadrature->value - *closed.reference) <= quadrature_tol;
      if (monte_carlo) {
        const std::optional<double> ref = quadrature ? std::optional<double>(quadrature->value) : closed.reference;
        if (ref) r.pass = r.pass && std::abs(monte_carlo->value - *ref) <= 3.0 * monte_carlo->standard_error;
      }
      return r;
  }
  return r;
}

std::vector<MomentReport> moment_table(Family family, const McOptions& options, double tol) {
  const std::vector<MomentTarget> targets = table_targets(family);
  const std::vector<McEstimate> mc = monte_carlo_table(family, options);
  std::vector<MomentReport> out;
  out.reserve(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const ClosedForm f = closed_form(targets[k]);
    std::optional<Estimate> quad;
    if (f.kind != ClosedForm::Kind::infinite && f.expression != "-") quad = by_quadrature(targets[k], tol);
    out.push_back(compare(targets[k], f, quad, mc[k]));
  }
  return out;
}

double correlation_ab_closed_form() noexcept {
  return 8.0 / 3.0 * std::sqrt((32.0 - 9.0 * kPi) / ((-64.0 + 27.0 * kPi) * kPi));
}

McEstimate correlation_ab_monte_carlo(const McOptions& options) {
  // columns: a, b, a^2, b^2, ab
  const BatchSums s = run_batches(Family::pinned, options, 5, [](const TriangleSample& t, double* acc) {
    const double a = t.triangle.a(), b = t.triangle.b();
    acc[0] += a;
    acc[1] += b;
    acc[2] += a * a;
    acc[3] += b * b;
    acc[4] += a * b;
  });
  std::array<double, 5> total{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < kBatches; ++i) {
    for (std::size_t k = 0; k < 5; ++k) total[k] += s.sums[i][k];
    n += s.sizes[i];
  }
  auto rho = [](const std::array<double, 5>& m, double count) {
    const double ea = m[0] / count, eb = m[1] / count;
    const double va = m[2] / count - ea * ea, vb = m[3] / count - eb * eb;
    return (m[4] / count - ea * eb) / std::sqrt(va * vb);
  };
  // delete-one-batch jackknife
  std::vector<double> leave_out(kBatches);
  for (std::size_t i = 0; i < kBatches; ++i) {
    std::array<double, 5> m = total;
    for (std::size_t k = 0; k < 5; ++k) m[k] -= s.sums[i][k];
    leave_out[i] = rho(m, static_cast<double>(n - s.sizes[i]));
  }
  double mean = 0.0;
  for (double v : leave_out) mean += v;
  mean /= kBatches;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  McEstimate e;
  e.value = rho(total, static_cast<double>(n));
  e.standard_error = std::sqrt((kBatches - 1.0) / kBatches * ss);
  e.n = n;
  return e;
}

ObtusenessParts pinned_obtuseness_parts(double tol) {
  auto tail = [tol](Angle which) {
    return moment_1d([which](double x) { return pdf_pinned_angle(which, x); }, 0, kHalfPi, kPi, {}, tol).value;
  };
  return {tail(Angle::alpha), tail(Angle::beta), tail(Angle::gamma)};
}

McEstimate acuteness(Family family, AcutenessMethod method, const McOptions& options) {
  if (family == Family::uniform_t) throw std::invalid_argument("acuteness: pinned, staked or anchored only");
  McEstimate e;
  switch (method) {
    case AcutenessMethod::closed:
      switch (family) {
        case Family::pinned: e.value = 0.25; break;
        case Family::staked:
          e.value = 0.5 * (std::exp(-kHalfPi) * bessel_i0(kHalfPi) - erfc(std::sqrt(kPi)));
          break;
        default: e.value = std::exp(-0.25 * kPi) - erfc(0.5 * std::sqrt(kPi)); break;
      }
      return e;
    case AcutenessMethod::quadrature: {
      if (family == Family::pinned) {
        const ObtusenessParts p = pinned_obtuseness_parts();
        e.value = 1.0 - (p.alpha + p.beta + p.gamma);
        return e;
      }
      // all three angles below pi/2: alpha < pi/2, pi/2 - alpha < beta < pi/2
      Region2d r;
      r.x0 = 0.0;
      r.x1 = kHalfPi;
      r.y_lower = [](double a) { return kHalfPi - a; };
      r.y_upper = [](double) { return kHalfPi; };
      auto joint = family == Family::staked ? &pdf_staked_angles_joint : &pdf_anchored_angles_joint;
      const Estimate q = from(integrate_2d(joint, r, spec_for(1e-12)));
      e.value = q.value;
      e.standard_error = q.error;
      return e;
    }
    case AcutenessMethod::monte_carlo: {
      const BatchSums s = run_batches(family, options, 1, [](const TriangleSample& t, double* acc) {
        if (t.angles.max() < kHalfPi) acc[0] += 1.0;
      });
      return batch_estimate(s, 0);
    }
  }
  return e;
}

ExpectedAc expected_ac(double tol) {
  // Inner integrals carry 1/sqrt(Delta) with Delta vanishing at the lower end.
  // Substituting x = lower + w sin^2 t there, the vanishing factor is w sin^2 t
  // exactly and cancels against the Jacobian 2 w sin t cos t.
  const QuadratureSpec inner = spec_for(std::max(1e-3 * tol, 1e-12), 200);
  QuadratureSpec middle_left = spec_for(std::max(1e-2 * tol, 1e-12), 400);
  middle_left.singularity = EndpointSingularity::inverse_sqrt_left;
  QuadratureSpec middle_both = middle_left;
  middle_both.singularity = EndpointSingularity::both;
  QuadratureSpec outer = spec_for(0.5 * tol, 400);
  outer.decay = GaussianDecay{kPi, 8};

  bool ok = true;
  double worst = 0.0;
  // `scale` is the Gaussian weight the value will be multiplied by
  auto track = [&](const IntegralResult& r, double scale) {
    ok = ok && r.converged;
    worst = std::max(worst, scale * r.error);
    return r.value;
  };

  // a < 2c:  b > 0, b/3 < c < b, b - c < a < 2c; factors (a - b + c) -> 0 at a = b - c
  auto first = [&](double b) {
    const double weight = std::exp(-kPi * b * b);
    if (weight == 0.0) return 0.0;
    auto over_c = [&](double c) {
      const double gap = b - c;
      const double w = 3.0 * c - b;
      if (!(w > 0.0)) return 0.0;
      auto h = [&](double t) {
        const double s = std::sin(t), co = std::cos(t);
        const double a = gap + w * s * s;
        // b + c - a = (b - c) + w cos^2 t
        const double rest = (a + b + c) * (a + gap) * (gap + w * co * co);
        return 16.0 * kPi * a * a * b * c * c * std::sqrt(w) * co / std::sqrt(rest);
      };
      return track(integrate_1d(h, 0.0, 0.5 * kPi, inner), weight);
    };
    return weight * track(integrate_1d(over_c, b / 3.0, b, middle_left), weight);
  };
  // a > 2c:  b > 0, 2b/3 < a < 2b, |b - a| < c < a/2; factor (c - |b - a|) -> 0 at the lower end
  auto second = [&](double b) {
    const double weight = std::exp(-kPi * b * b);
    if (weight == 0.0) return 0.0;
    auto over_a = [&](double a) {
      const double d = std::abs(b - a);
      const double w = 0.5 * a - d;
      if (!(w > 0.0)) return 0.0;
      auto h = [&](double t) {
        const double s = std::sin(t), co = std::cos(t);
        const double c = d + w * s * s;
        const double rest = (a + b + c) * (c + d) * (a + b - c);
        return 16.0 * kPi * a * a * b * c * c * std::sqrt(w) * co / std::sqrt(rest);
      };
      return track(integrate_1d(h, 0.0, 0.5 * kPi, inner), weight);
    };
    return weight * (track(integrate_1d(over_a, 2.0 * b / 3.0, b, middle_both), weight) +
                     track(integrate_1d(over_a, b, 2.0 * b, middle_both), weight));
  };
  const IntegralResult r1 = integrate_1d(first, 0.0, kInf, outer);
  const IntegralResult r2 = integrate_1d(second, 0.0, kInf, outer);
  ExpectedAc out;
  out.first_branch = r1.value;
  out.second_branch = r2.value;
  out.value = r1.value + r2.value;
  out.error = r1.error + r2.error + worst;
  if (!(ok && r1.converged && r2.converged))
    throw QuadratureError("expected_ac: nested quadrature did not converge", out.value, out.error + worst);
  return out;
}

Estimate truncated_second_moment_b_over_c(double m, double tol) {
  if (!(m > 1.0)) throw std::invalid_argument("truncated second moment: M must exceed 1");
  return moment_1d([](double x) { return pdf_ratio(Ratio::b_over_c, x); }, 2, 1.0, m, {}, tol);
}

}  // namespace poistri
