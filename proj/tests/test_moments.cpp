#include <cmath>

#include "doctest.h"
#include "poistri/errors.hpp"
#include "poistri/moments.hpp"
#include "poistri/numerics.hpp"

using namespace poistri;

namespace {

// high-precision values of the published decimals (mpmath, 30 digits)
constexpr double kStakedBetaMean = 0.34306160640;
constexpr double kStakedBetaMeanSquare = 0.20825399139;
constexpr double kStakedAlphaBeta = 0.43825535335;
constexpr double kAnchoredAlphaMean = 0.71706372493;
constexpr double kAnchoredAlphaMeanSquare = 0.92490176521;
constexpr double kAnchoredAlphaBeta = 0.39837926410;
constexpr double kExpectedAc = 0.49181215389023545311;

}  // namespace

TEST_CASE("closed forms") {
  CHECK(closed_form({Family::pinned, Quantity::beta, Statistic::mean}).value ==
        doctest::Approx(1.1037080495812390).epsilon(1e-14));
  CHECK(closed_form({Family::pinned, Quantity::b_over_c, Statistic::mean_square}).kind == ClosedForm::Kind::infinite);
  CHECK(closed_form({Family::pinned, Quantity::area, Statistic::mean}).value ==
        doctest::Approx(0.13509491152311703).epsilon(1e-15));
  CHECK(closed_form({Family::pinned, Quantity::ab, Statistic::mean_square}).kind == ClosedForm::Kind::unavailable);
  const ClosedForm ca = closed_form({Family::pinned, Quantity::ca, Statistic::mean});
  CHECK(ca.kind == ClosedForm::Kind::unavailable);
  REQUIRE(ca.reference.has_value());
  CHECK(*ca.reference == 0.49181215);
  CHECK_THROWS_AS(closed_form({Family::staked, Quantity::a, Statistic::mean}), std::invalid_argument);
  CHECK(table_targets(Family::pinned).size() == 38);
  CHECK(table_targets(Family::staked).size() == 6);
}

TEST_CASE("pinned angle identities in closed form") {
  auto v = [](Quantity q, Statistic s = Statistic::mean) { return closed_form({Family::pinned, q, s}).value; };
  CHECK(v(Quantity::alpha_beta) - v(Quantity::beta_gamma) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v(Quantity::alpha) + v(Quantity::beta) + v(Quantity::gamma) == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("pinned table: quadrature matches every finite closed form") {
  for (const MomentTarget& t : table_targets(Family::pinned)) {
    const ClosedForm f = closed_form(t);
    INFO(label(t));
    if (f.kind == ClosedForm::Kind::infinite) {
      CHECK_THROWS_AS(by_quadrature(t), DivergentError);
      continue;
    }
    if (f.kind != ClosedForm::Kind::value) continue;
    const Estimate e = by_quadrature(t, 1e-10);
    CHECK(std::abs(e.value - f.value) < 1e-8);
  }
}

TEST_CASE("gamma mean by quadrature to 1e-10") {
  const Estimate e = by_quadrature({Family::pinned, Quantity::gamma, Statistic::mean}, 1e-12);
  CHECK(std::abs(e.value - (kPi / 4 - 1 / kPi)) < 1e-10);
}

TEST_CASE("angle product identity by quadrature") {
  const double ab = by_quadrature({Family::pinned, Quantity::alpha_beta, Statistic::mean}, 1e-11).value;
  const double bg = by_quadrature({Family::pinned, Quantity::beta_gamma, Statistic::mean}, 1e-11).value;
  CHECK(std::abs(ab - (0.25 + kPi * kPi / 12)) < 1e-8);
  CHECK(std::abs(bg - (-0.25 + kPi * kPi / 12)) < 1e-8);
}

TEST_CASE("staked and anchored tables by quadrature") {
  auto q = [](Family f, Quantity qq, Statistic s) { return by_quadrature({f, qq, s}, 1e-10).value; };
  CHECK(std::abs(q(Family::staked, Quantity::alpha, Statistic::mean) - kPi / 2) < 1e-9);
  CHECK(std::abs(q(Family::staked, Quantity::alpha, Statistic::mean_square) - kPi * kPi / 3) < 1e-9);
  CHECK(std::abs(q(Family::staked, Quantity::beta, Statistic::mean) - kStakedBetaMean) < 1e-9);
  CHECK(std::abs(q(Family::staked, Quantity::beta, Statistic::mean_square) - kStakedBetaMeanSquare) < 1e-9);
  CHECK(std::abs(q(Family::staked, Quantity::alpha_beta, Statistic::mean) - kStakedAlphaBeta) < 1e-9);
  CHECK(std::abs(q(Family::anchored, Quantity::alpha, Statistic::mean) - kAnchoredAlphaMean) < 1e-9);
  CHECK(std::abs(q(Family::anchored, Quantity::beta, Statistic::mean) - kAnchoredAlphaMean) < 1e-9);
  CHECK(std::abs(q(Family::anchored, Quantity::alpha, Statistic::mean_square) - kAnchoredAlphaMeanSquare) < 1e-9);
  CHECK(std::abs(q(Family::anchored, Quantity::alpha_beta, Statistic::mean) - kAnchoredAlphaBeta) < 1e-9);
}

TEST_CASE("expected_ac") {
  const ExpectedAc e = expected_ac(1e-9);
  CHECK(std::abs(e.value - kExpectedAc) < 1e-8);
  CHECK(std::abs(e.value - 0.49181215) < 1e-7);
  CHECK(e.first_branch > 0);
  CHECK(e.second_branch > 0);
  CHECK(e.error < 1e-7);
}

TEST_CASE("truncated b/c second moment is 2 ln M") {
  for (double m : {10.0, 100.0, 1000.0})
    CHECK(std::abs(truncated_second_moment_b_over_c(m).value - 2 * std::log(m)) < 1e-10);
}

TEST_CASE("correlation of a and b") {
  const double rho = correlation_ab_closed_form();
  CHECK(std::abs(rho - 0.636) < 0.001);
  CHECK(rho == doctest::Approx(0.63639109697896286464).epsilon(1e-14));
  // from the table: Cov / sqrt(Var Var)
  const double ea = 8 / (3 * kPi), eb = 0.75, eab = 64 / (9 * kPi * kPi);
  const double va = 3 / kPi - ea * ea, vb = 2 / kPi - eb * eb;
  CHECK(rho == doctest::Approx((eab - ea * eb) / std::sqrt(va * vb)).epsilon(1e-14));
}

TEST_CASE("acuteness closed forms and quadrature") {
  const double staked = acuteness(Family::staked, AcutenessMethod::closed).value;
  const double anchored = acuteness(Family::anchored, AcutenessMethod::closed).value;
  CHECK(staked == doctest::Approx(0.17255246981383488582).epsilon(1e-14));
  CHECK(anchored == doctest::Approx(0.24584672232205896139).epsilon(1e-14));
  CHECK(anchored > staked);
  CHECK(acuteness(Family::pinned, AcutenessMethod::closed).value == 0.25);
  CHECK(std::abs(acuteness(Family::staked, AcutenessMethod::quadrature).value - staked) < 1e-10);
  CHECK(std::abs(acuteness(Family::anchored, AcutenessMethod::quadrature).value - anchored) < 1e-10);
  CHECK(std::abs(acuteness(Family::pinned, AcutenessMethod::quadrature).value - 0.25) < 1e-10);
  const ObtusenessParts p = pinned_obtuseness_parts();
  CHECK(std::abs(p.alpha - 0.5) < 1e-10);
  CHECK(std::abs(p.beta - 0.25) < 1e-10);
  CHECK(p.gamma == 0.0);
}

TEST_CASE("monte carlo table is reproducible and independent of worker count") {
  McOptions o;
  o.n = 20000;
  o.seed = 99;
  o.workers = 1;
  const auto one = monte_carlo_table(Family::staked, o);
  o.workers = 3;
  const auto three = monte_carlo_table(Family::staked, o);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].value == three[i].value);
    CHECK(one[i].standard_error == three[i].standard_error);
  }
}

TEST_CASE("monte carlo agrees with the pinned table at modest n") {
  McOptions o;
  o.n = 200000;
  o.seed = 20171221;
  o.stream_id = 1;
  const auto targets = table_targets(Family::pinned);
  const auto mc = monte_carlo_table(Family::pinned, o);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const ClosedForm f = closed_form(targets[i]);
    INFO(label(targets[i]));
    if (f.kind == ClosedForm::Kind::infinite) CHECK(mc[i].divergent);
    if (f.kind != ClosedForm::Kind::value) continue;
    // 4 sigma at this smaller n: 30 simultaneous comparisons
    CHECK(std::abs(mc[i].value - f.value) <= 4 * mc[i].standard_error);
  }
  const McEstimate single = by_monte_carlo({Family::pinned, Quantity::c, Statistic::mean}, o);
  CHECK(std::abs(single.value - 0.5) < 4 * single.standard_error);
}

TEST_CASE("compare verdicts") {
  const MomentTarget t{Family::pinned, Quantity::c, Statistic::mean};
  const ClosedForm f = closed_form(t);
  CHECK(compare(t, f, Estimate{0.5, 1e-12}, McEstimate{0.501, 0.001, 1000, false}).pass);
  CHECK_FALSE(compare(t, f, Estimate{0.5001, 1e-12}, std::nullopt).pass);
  CHECK_FALSE(compare(t, f, std::nullopt, McEstimate{0.51, 0.001, 1000, false}).pass);
  const MomentTarget d{Family::pinned, Quantity::b_over_c, Statistic::mean_square};
  CHECK(compare(d, closed_form(d), std::nullopt, McEstimate{40.0, 10.0, 1000, true}).pass);
}
