#include "poistri/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "poistri/density.hpp"
#include "poistri/errors.hpp"
#include "poistri/gof.hpp"
#include "poistri/moments.hpp"
#include "poistri/numerics.hpp"
#include "poistri/sampler.hpp"

namespace poistri {

namespace {

constexpr double kHalfPi = 0.5 * kPi;

std::string family_of(DensityKind kind) {
  const std::string_view name = to_string(kind);
  if (name.starts_with("staked")) return "staked";
  if (name.starts_with("anchored")) return "anchored";
  if (name.starts_with("uT")) return "uniformT";
  return "pinned";
}

std::string tag(int criterion) {
  return std::string(criterion < 10 ? "c0" : "c") + std::to_string(criterion) + ".";
}

class Recorder {
 public:
  explicit Recorder(const VerifyConfig& config) : fault_(config.inject_fault) {}

  // |actual - expected| <= tolerance
  void within(int criterion, const std::string& name, const std::string& family, double expected, double actual,
              double tolerance) {
    Check c{tag(criterion) + name, criterion, family, expected, actual, tolerance, false};
    if (c.name == fault_) {
      expected += 2.0 * tolerance + 1e-3;
      c.expected = expected;
      fault_hit_ = true;
    }
    c.pass = std::abs(actual - expected) <= tolerance;
    checks_.push_back(std::move(c));
  }

  // A verdict that is not a distance: `expected` describes the condition.
  void verdict(int criterion, const std::string& name, const std::string& family, const std::string& expected,
               double actual, double tolerance, bool pass) {
    Check c{tag(criterion) + name, criterion, family, expected, actual, tolerance, pass};
    if (c.name == fault_) {
      c.pass = false;
      fault_hit_ = true;
    }
    checks_.push_back(std::move(c));
  }

  // A computation that threw: recorded as a failed check.
  void error(int criterion, const std::string& name, const std::string& family, const std::string& what) {
    checks_.push_back({tag(criterion) + name, criterion, family, "error: " + what, std::nan(""), 0.0, false});
  }

  VerifyReport finish() {
    if (!fault_.empty() && !fault_hit_) throw std::invalid_argument("inject_fault: no check named " + fault_);
    return {std::move(checks_)};
  }

 private:
  std::string fault_;
  bool fault_hit_ = false;
  std::vector<Check> checks_;
};

McOptions mc(const VerifyConfig& config, std::size_t n, std::uint64_t stream_id) {
  McOptions o;
  o.n = n;
  o.seed = config.seed;
  o.stream_id = stream_id;
  o.workers = config.workers;
  return o;
}

double integrate_law(const UnivariateLaw& law) {
  std::vector<double> cuts{law.lower};
  cuts.insert(cuts.end(), law.breakpoints.begin(), law.breakpoints.end());
  cuts.push_back(law.upper);
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 2000;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate_1d(law.pdf, cuts[i], cuts[i + 1], spec).value;
  return total;
}

QuadratureSpec spec_2d(double tol) {
  QuadratureSpec spec;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  spec.max_subdivisions = 1000;
  return spec;
}

double joint_sides(double x, double y, double z) { return pdf_pinned_sides_joint(x, y, z).value; }

// Marginal of the trivariate sides density at `s` for side a, b or c.
double side_marginal(Side which, double s) {
  const QuadratureSpec spec = spec_2d(1e-9);
  Region2d r;
  r.inner_singularity = EndpointSingularity::both;
  switch (which) {
    case Side::a:
      // b in (s/2, inf), c in (|b - s|, b); Delta vanishes only at the lower end
      r.x0 = s / 2;
      r.x1 = kInf;
      r.outer_decay = GaussianDecay{kPi, 3};
      r.y_lower = [s](double y) { return std::abs(y - s); };
      r.y_upper = [](double y) { return y; };
      r.inner_singularity = EndpointSingularity::inverse_sqrt_left;
      return integrate_2d([s](double y, double z) { return joint_sides(s, y, z); }, r, spec).value;
    case Side::b:
      r.x0 = 0.0;
      r.x1 = s;
      r.y_lower = [s](double z) { return s - z; };
      r.y_upper = [s](double z) { return s + z; };
      return integrate_2d([s](double z, double x) { return joint_sides(x, s, z); }, r, spec).value;
    case Side::c:
      r.x0 = s;
      r.x1 = kInf;
      r.outer_decay = GaussianDecay{kPi, 2};
      r.y_lower = [s](double y) { return y - s; };
      r.y_upper = [s](double y) { return y + s; };
      return integrate_2d([s](double y, double x) { return joint_sides(x, y, s); }, r, spec).value;
  }
  return 0.0;
}

void normalization(const VerifyConfig&, Recorder& rec) {
  constexpr int C = 1;
  using K = DensityKind;
  for (DensityKind kind : kAllDensityKinds) {
    if (support(kind).dimension != 1) continue;
    const double tol = kind == K::uT_side_a ? 1e-6 : 1e-8;
    const std::string name = std::string(to_string(kind)) + ".mass";
    try {
      rec.within(C, name, family_of(kind), 1.0, integrate_law(law_for(kind)), tol);
    } catch (const std::exception& e) {
      rec.error(C, name, family_of(kind), e.what());
    }
  }

  Region2d ac = Region2d::rectangle(0.0, 8.0, 0.0, 6.0);  // a <= 2b carries exp(-pi a^2 / 4)
  rec.within(C, "pair_ac_integral.mass", "pinned", 1.0,
             integrate_2d([](double a, double c) { return pdf_pair_ac(a, c, 1e-11); }, ac, spec_2d(1e-8)).value,
             1e-6);

  const QuadratureSpec spec = spec_2d(1e-10);
  rec.within(C, "staked_angles_joint.mass", "staked", 1.0,
             integrate_2d(&pdf_staked_angles_joint, Region2d::simplex(kPi), spec).value, 1e-8);
  rec.within(C, "anchored_angles_joint.mass", "anchored", 1.0,
             integrate_2d(&pdf_anchored_angles_joint, Region2d::simplex(kPi), spec).value, 1e-8);
  Region2d angles;
  angles.x0 = 0.0;
  angles.x1 = kPi;
  angles.y_lower = [](double a) { return 0.5 * (kPi - a); };
  angles.y_upper = [](double a) { return kPi - a; };
  rec.within(C, "pinned_angles_joint.mass", "pinned", 1.0, integrate_2d(&pdf_pinned_angles_joint, angles, spec).value,
             1e-8);
  Region2d ab;
  ab.x0 = 0.0;
  ab.x1 = kInf;
  ab.outer_decay = GaussianDecay{kPi, 3};
  ab.y_lower = [](double) { return 0.0; };
  ab.y_upper = [](double b) { return 2.0 * b; };
  rec.within(C, "pair_ab.mass", "pinned", 1.0,
             integrate_2d([](double b, double a) { return pdf_pair(Pair::ab, a, b); }, ab, spec).value, 1e-8);
  Region2d bc = ab;
  bc.y_upper = [](double b) { return b; };
  rec.within(C, "pair_bc.mass", "pinned", 1.0,
             integrate_2d([](double b, double c) { return pdf_pair(Pair::bc, b, c); }, bc, spec).value, 1e-8);

  // trivariate: b outermost, then the b-marginal slice
  QuadratureSpec outer = spec_2d(1e-8);
  outer.decay = GaussianDecay{kPi, 3};
  auto b_slice = [](double y) {
    Region2d rb;
    rb.x0 = 0.0;
    rb.x1 = y;
    rb.y_lower = [y](double z) { return y - z; };
    rb.y_upper = [y](double z) { return y + z; };
    rb.inner_singularity = EndpointSingularity::both;
    return integrate_2d([y](double z, double x) { return joint_sides(x, y, z); }, rb, spec_2d(1e-9)).value;
  };
  rec.within(C, "pinned_sides_joint.mass", "pinned", 1.0, integrate_1d(b_slice, 0.0, kInf, outer).value, 1e-6);
}

void table_one(const VerifyConfig& config, Recorder& rec, std::vector<McEstimate>& mc_table) {
  constexpr int C = 2;
  const std::vector<MomentTarget> targets = table_targets(Family::pinned);
  mc_table = monte_carlo_table(Family::pinned, mc(config, config.n_moments, 201));
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const ClosedForm f = closed_form(targets[k]);
    if (f.kind != ClosedForm::Kind::value) continue;
    const std::string name = label(targets[k]);
    try {
      rec.within(C, name + ".quadrature", "pinned", f.value, by_quadrature(targets[k], config.tol).value, 1e-6);
    } catch (const std::exception& e) {
      rec.error(C, name + ".quadrature", "pinned", e.what());
    }
    rec.within(C, name + ".mc", "pinned", f.value, mc_table[k].value, 3.0 * mc_table[k].standard_error);
  }
}

void expected_ac_check(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 3;
  constexpr double kPublished = 0.49181215;
  const ExpectedAc q = expected_ac(std::min(config.tol, 1e-9));
  rec.within(C, "pinned/ca/mean.quadrature", "pinned", kPublished, q.value, 1e-7);
  rec.verdict(C, "pinned/ca/mean.quadrature_error", "pinned", "error bound below 1e-8", q.error, 1e-8,
              q.error <= 1e-8);
  const McEstimate m = by_monte_carlo({Family::pinned, Quantity::ca, Statistic::mean}, mc(config, config.n_ac, 301));
  rec.within(C, "pinned/ca/mean.mc", "pinned", kPublished, m.value, 3.0 * m.standard_error);
}

void correlation(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 4;
  const double closed = correlation_ab_closed_form();
  rec.within(C, "pinned/rho_ab.closed", "pinned", 0.636, closed, 0.001);
  const McEstimate m = correlation_ab_monte_carlo(mc(config, config.n_moments, 401));
  rec.within(C, "pinned/rho_ab.mc", "pinned", closed, m.value, 3.0 * m.standard_error);
}

void acuteness_checks(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 5;
  const McEstimate pinned = acuteness(Family::pinned, AcutenessMethod::monte_carlo, mc(config, config.n_moments, 501));
  rec.within(C, "pinned/obtuse.mc", "pinned", 0.75, 1.0 - pinned.value, 3.0 * pinned.standard_error);
  const ObtusenessParts parts = pinned_obtuseness_parts();
  rec.within(C, "pinned/obtuse.alpha", "pinned", 0.5, parts.alpha, 1e-8);
  rec.within(C, "pinned/obtuse.beta", "pinned", 0.25, parts.beta, 1e-8);
  rec.within(C, "pinned/obtuse.gamma", "pinned", 0.0, parts.gamma, 1e-8);
  rec.within(C, "pinned/obtuse.sum", "pinned", 0.75, parts.alpha + parts.beta + parts.gamma, 1e-8);

  struct Row {
    Family family;
    double published;
    std::uint64_t stream;
  };
  double staked = 0.0, anchored = 0.0;
  for (const Row& row : {Row{Family::staked, 0.1725524698, 502}, Row{Family::anchored, 0.2458467223, 503}}) {
    const std::string fam(to_string(row.family));
    const double closed = acuteness(row.family, AcutenessMethod::closed).value;
    rec.within(C, fam + "/acute.closed", fam, row.published, closed, 1e-10);
    rec.within(C, fam + "/acute.quadrature", fam, closed, acuteness(row.family, AcutenessMethod::quadrature).value,
               1e-8);
    const McEstimate m = acuteness(row.family, AcutenessMethod::monte_carlo, mc(config, config.n_moments, row.stream));
    rec.within(C, fam + "/acute.mc", fam, closed, m.value, 3.0 * m.standard_error);
    (row.family == Family::staked ? staked : anchored) = closed;
  }
  rec.verdict(C, "anchored_vs_staked/acute", "anchored", "anchored > staked", anchored - staked, 0.0,
              anchored > staked);
}

void tables_two_three(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 6;
  for (Family family : {Family::staked, Family::anchored}) {
    const std::string fam(to_string(family));
    for (const MomentTarget& t : table_targets(family)) {
      const ClosedForm f = closed_form(t);
      if (f.expression == "-") continue;
      const double expected = f.kind == ClosedForm::Kind::value ? f.value : *f.reference;
      try {
        rec.within(C, label(t) + ".quadrature", fam, expected, by_quadrature(t, config.tol).value, 1e-6);
      } catch (const std::exception& e) {
        rec.error(C, label(t) + ".quadrature", fam, e.what());
      }
    }
  }
}

std::vector<double> column(const std::vector<TriangleSample>& draws, double (*f)(const TriangleSample&)) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& t : draws) out.push_back(f(t));
  return out;
}

void gof_report(Recorder& rec, int criterion, const std::string& name, const std::string& family,
                const GofReport& r) {
  rec.within(criterion, name, family, 0.0, r.statistic, r.threshold);
}

void oracle_equivalence(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 7;
  const auto oracle = sample_many(&sample_pinned_oracle, config.n_ks, RandomStream(config.seed, 701), config.workers);
  const auto direct = sample_many(Family::pinned, config.n_ks, RandomStream(config.seed, 702), config.workers);
  using T = const TriangleSample&;
  const std::pair<const char*, double (*)(T)> sides[] = {
      {"a", [](T t) { return t.triangle.a(); }},
      {"b", [](T t) { return t.triangle.b(); }},
      {"c", [](T t) { return t.triangle.c(); }},
  };
  for (const auto& [name, f] : sides)
    gof_report(rec, C, std::string("pinned/") + name + ".oracle_ks2", "pinned",
               ks_two_sample(EmpiricalSample(column(oracle, f)), EmpiricalSample(column(direct, f)), config.alpha));
}

void ks_matrix(const VerifyConfig& config, Recorder& rec) {
  constexpr int C = 8;
  const std::vector<TriangleSample> pinned =
      sample_many(Family::pinned, config.n_ks, RandomStream(config.seed, 801), config.workers);
  const std::vector<TriangleSample> staked =
      sample_many(Family::staked, config.n_ks, RandomStream(config.seed, 802), config.workers);
  const std::vector<TriangleSample> anchored =
      sample_many(Family::anchored, config.n_ks, RandomStream(config.seed, 803), config.workers);
  const std::vector<TriangleSample> uniform =
      sample_many(Family::uniform_t, config.n_ks, RandomStream(config.seed, 804), config.workers);
  auto draws_of = [&](Family f) -> const std::vector<TriangleSample>& {
    switch (f) {
      case Family::pinned: return pinned;
      case Family::staked: return staked;
      case Family::anchored: return anchored;
      case Family::uniform_t: break;
    }
    return uniform;
  };

  using K = DensityKind;
  using T = const TriangleSample&;
  std::vector<SampledStatistic> cells;
  for (K kind : {K::pinned_a, K::pinned_b, K::pinned_c, K::pinned_alpha, K::pinned_beta, K::pinned_gamma,
                 K::ratio_a_over_b, K::ratio_b_over_a, K::ratio_b_over_c, K::ratio_c_over_b, K::ratio_c_over_a,
                 K::ratio_a_over_c, K::staked_angles_joint})
    cells.push_back(statistic_for(kind));
  cells.push_back({Family::staked, "beta", [](T t) { return t.angles.beta(); }, staked_angle_law(Angle::beta)});
  cells.push_back(statistic_for(K::anchored_angles_joint));
  cells.push_back({Family::anchored, "beta", [](T t) { return t.angles.beta(); }, anchored_angle_law()});
  cells.push_back(statistic_for(K::uT_side_a));

  for (const SampledStatistic& cell : cells) {
    const std::string fam(to_string(cell.family));
    const std::string name = fam + "/" + cell.name + ".ks";
    try {
      gof_report(rec, C, name, fam,
                 ks_one_sample(EmpiricalSample(column(draws_of(cell.family), cell.value)), TabulatedCdf(cell.law),
                               config.alpha));
    } catch (const std::exception& e) {
      rec.error(C, name, fam, e.what());
    }
  }

  // mismatched laws must be rejected
  const GofReport b_as_c = ks_one_sample(EmpiricalSample(column(pinned, [](T t) { return t.triangle.b(); })),
                                         TabulatedCdf(law_for(K::pinned_c)), config.alpha);
  rec.verdict(C, "pinned/b_vs_c_density.ks_control", "pinned", "reject", b_as_c.statistic, b_as_c.threshold,
              b_as_c.statistic > b_as_c.threshold);
  const GofReport anchored_as_staked =
      ks_one_sample(EmpiricalSample(column(anchored, [](T t) { return t.angles.alpha(); })),
                    TabulatedCdf(staked_angle_law(Angle::alpha)), config.alpha);
  rec.verdict(C, "anchored/alpha_vs_staked_density.ks_control", "anchored", "reject", anchored_as_staked.statistic,
              anchored_as_staked.threshold, anchored_as_staked.statistic > anchored_as_staked.threshold);
}

void marginal_consistency(const VerifyConfig&, Recorder& rec) {
  constexpr int C = 9;
  for (Side side : {Side::a, Side::b, Side::c}) {
    const char* name = side == Side::a ? "a" : side == Side::b ? "b" : "c";
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double s = 0.1 + 0.1 * i;
      worst = std::max(worst, std::abs(side_marginal(side, s) - pdf_pinned_side(side, s)));
    }
    rec.within(C, std::string("pinned_sides_joint/marginal_") + name, "pinned", 0.0, worst, 1e-5);
  }

  QuadratureSpec spec;
  spec.abs_tol = spec.rel_tol = 1e-12;
  double worst_alpha = 0.0, worst_beta = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.05 + 0.155 * i;
    const double over_beta =
        integrate_1d([x](double b) { return pdf_pinned_angles_joint(x, b); }, 0.5 * (kPi - x), kPi - x, spec).value;
    worst_alpha = std::max(worst_alpha, std::abs(over_beta - 1.0 / kPi));
    const double over_alpha = integrate_1d([x](double a) { return pdf_pinned_angles_joint(a, x); },
                                           std::max(0.0, kPi - 2.0 * x), kPi - x, spec)
                                  .value;
    worst_beta = std::max(worst_beta, std::abs(over_alpha - pdf_pinned_angle(Angle::beta, x)));
  }
  rec.within(C, "pinned_angles_joint/marginal_alpha", "pinned", 0.0, worst_alpha, 1e-6);
  rec.within(C, "pinned_angles_joint/marginal_beta", "pinned", 0.0, worst_beta, 1e-6);

  double worst_staked = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.05 + 0.155 * i;
    worst_staked = std::max(worst_staked, std::abs(staked_angle_marginal(Angle::alpha, x) - 1.0 / kPi));
  }
  rec.within(C, "staked_angles_joint/marginal_alpha", "staked", 0.0, worst_staked, 1e-6);
}

void uniform_triangle(const VerifyConfig&, Recorder& rec) {
  constexpr int C = 10;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = 0.07 + 0.15 * i;  // skips the singular point 1
    const double arg[1] = {x};
    worst = std::max(worst, std::abs(evaluate(DensityKind::uT_ratio, arg).value -
                                     evaluate(DensityKind::uT_side_a, arg).value));
  }
  rec.within(C, "uT_ratio/equals_side_a", "uniformT", 0.0, worst, 1e-12);
  rec.within(C, "uT_max.mass", "uniformT", 1.0, integrate_law(law_for(DensityKind::uT_max)), 1e-6);
  rec.within(C, "uT_min.mass", "uniformT", 1.0, integrate_law(law_for(DensityKind::uT_min)), 1e-6);
}

void divergence(const VerifyConfig& config, Recorder& rec, const std::vector<McEstimate>& mc_table) {
  constexpr int C = 11;
  for (double m : {10.0, 100.0, 1000.0})
    rec.within(C, "pinned/b_over_c/truncated_m" + std::to_string(static_cast<int>(m)), "pinned", 2.0 * std::log(m),
               truncated_second_moment_b_over_c(m).value, 1e-10);

  const std::vector<MomentTarget> targets = table_targets(Family::pinned);
  std::vector<McEstimate> table = mc_table;
  if (table.empty()) table = monte_carlo_table(Family::pinned, mc(config, config.n_moments, 201));
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const ClosedForm f = closed_form(targets[k]);
    if (f.kind != ClosedForm::Kind::infinite) continue;
    bool refused = false;
    try {
      by_quadrature(targets[k], config.tol);
    } catch (const DivergentError&) {
      refused = true;
    }
    // the value column carries the finite-sample Monte Carlo mean, which never settles
    rec.verdict(C, label(targets[k]) + ".flag", "pinned", "inf", table[k].value, 0.0,
                refused && table[k].divergent);
  }
}

}  // namespace

bool VerifyReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<const Check*> VerifyReport::failures() const {
  std::vector<const Check*> out;
  for (const Check& c : checks)
    if (!c.pass) out.push_back(&c);
  return out;
}

VerifyReport run_verify(const VerifyConfig& config, const std::function<void(int)>& on_criterion) {
  if (config.workers < 1) throw std::invalid_argument("verify: workers must be at least 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw std::invalid_argument("verify: alpha must lie in (0, 1)");
  if (!(config.tol > 0.0)) throw std::invalid_argument("verify: tol must be positive");
  if (config.n_moments < kBatches * 2 || config.n_ac < kBatches * 2 || config.n_ks < 100)
    throw std::invalid_argument("verify: sample sizes too small");
  for (int c : config.criteria)
    if (c < 1 || c > 11) throw std::invalid_argument("verify: criteria are numbered 1 to 11");

  auto wanted = [&](int c) {
    return config.criteria.empty() || std::find(config.criteria.begin(), config.criteria.end(), c) !=
                                          config.criteria.end();
  };
  Recorder rec(config);
  std::vector<McEstimate> mc_table;
  auto step = [&](int c, auto&& body) {
    if (!wanted(c)) return;
    if (on_criterion) on_criterion(c);
    body();
  };
  step(1, [&] { normalization(config, rec); });
  step(2, [&] { table_one(config, rec, mc_table); });
  step(3, [&] { expected_ac_check(config, rec); });
  step(4, [&] { correlation(config, rec); });
  step(5, [&] { acuteness_checks(config, rec); });
  step(6, [&] { tables_two_three(config, rec); });
  step(7, [&] { oracle_equivalence(config, rec); });
  step(8, [&] { ks_matrix(config, rec); });
  step(9, [&] { marginal_consistency(config, rec); });
  step(10, [&] { uniform_triangle(config, rec); });
  step(11, [&] { divergence(config, rec, mc_table); });
  return rec.finish();
}

}  // namespace poistri
