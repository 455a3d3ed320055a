#include <cmath>

#include "doctest.h"
#include "poistri/density.hpp"
#include "poistri/errors.hpp"
#include "poistri/gof.hpp"
#include "poistri/numerics.hpp"
#include "poistri/sampler.hpp"

using namespace poistri;

namespace {

constexpr std::uint64_t kSeed = 20171221;

struct MeanSe {
  double mean, se;
};

template <class F>
MeanSe mean_of(const std::vector<TriangleSample>& s, F f) {
  double sum = 0, sum2 = 0;
  for (const auto& t : s) {
    const double v = f(t);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(s.size());
  const double m = sum / n;
  return {m, std::sqrt((sum2 / n - m * m) / n)};
}

template <class F>
EmpiricalSample collect(const std::vector<TriangleSample>& s, F f) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& t : s) v.push_back(f(t));
  return EmpiricalSample(std::move(v));
}

}  // namespace

TEST_CASE("family names") {
  CHECK(to_string(Family::uniform_t) == "uniformT");
  CHECK(parse_family("staked") == Family::staked);
  CHECK_FALSE(parse_family("pinnned").has_value());
}

TEST_CASE("forced draws") {
  const double r = 1 / kPi;
  const TriangleSample p = pinned_from_polar(r, r, 0.0, kPi / 2);
  CHECK(p.B.x == doctest::Approx(1 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(std::abs(p.B.y) < 1e-15);
  CHECK(std::abs(p.C.x) < 1e-15);
  CHECK(p.C.y == doctest::Approx(std::sqrt(2 / kPi)).epsilon(1e-15));
  CHECK(p.triangle.c() == doctest::Approx(1 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(p.triangle.b() == doctest::Approx(std::sqrt(2 / kPi)).epsilon(1e-15));
  CHECK(p.triangle.a() == doctest::Approx(std::sqrt(3 / kPi)).epsilon(1e-15));

  const TriangleSample s = staked_from_point({0.5, 0.5});
  CHECK(s.angles.alpha() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(s.angles.beta() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK_THROWS_AS(staked_from_point({0.5, 0.0}), DomainError);

  const TriangleSample a = anchored_from_point({0.0, 0.5});
  CHECK(a.angles.alpha() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(a.angles.beta() == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(a.A.x == -0.5);
  CHECK(a.B.x == 0.5);
}

TEST_CASE("uniform T construction") {
  const TriangleSample eq = uniform_t_from_uniforms(kPi / 3, kPi / 3);
  CHECK(eq.angles.alpha() == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(eq.angles.beta() == doctest::Approx(kPi / 3).epsilon(1e-14));
  // intersection of y = x tan(alpha) and y = (1 - x) tan(beta)
  CHECK(eq.C.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq.C.y == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(eq.triangle.c() == 1.0);

  const TriangleSample folded = uniform_t_from_uniforms(3 * kPi / 4, 3 * kPi / 4);
  CHECK(folded.angles.alpha() == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(folded.angles.beta() == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(folded.C.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(folded.C.y == doctest::Approx(0.5).epsilon(1e-15));

  for (double al : {0.2, 1.0, 1.5707963267948966, 2.5})
    for (double be : {0.1, 0.4}) {
      const PlanarPoint c = apex_from_base_angles(al, be);
      const double tan_a = std::tan(al), tan_b = std::tan(be);
      CHECK(c.y == doctest::Approx(tan_b * (1 - c.x)).epsilon(1e-12));
      if (std::abs(al - kPi / 2) > 1e-9) {
        const double x = tan_b / (tan_a + tan_b);
        CHECK(c.x == doctest::Approx(x).epsilon(1e-12));
      }
    }
  CHECK_THROWS_AS(uniform_t_from_uniforms(1.0, kPi - 1.0 + 0.0), DomainError);
}

TEST_CASE("reproducibility and worker independence") {
  const RandomStream base(kSeed, 7);
  const auto one = sample_many(Family::pinned, 10000, base, 1);
  const auto four = sample_many(Family::pinned, 10000, base, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].C.x == four[i].C.x);
    REQUIRE(one[i].C.y == four[i].C.y);
  }
}

TEST_CASE("sample invariants") {
  SamplerDiagnostics diag;
  for (Family f : {Family::pinned, Family::staked, Family::anchored, Family::uniform_t}) {
    const auto draws = sample_many(f, 50000, RandomStream(kSeed, 10 + static_cast<int>(f)), 1, &diag);
    for (const auto& t : draws) {
      const double ab = std::hypot(t.A.x - t.B.x, t.A.y - t.B.y);
      const double bc = std::hypot(t.B.x - t.C.x, t.B.y - t.C.y);
      const double ca = std::hypot(t.C.x - t.A.x, t.C.y - t.A.y);
      REQUIRE(std::abs(t.triangle.a() - bc) <= 1e-10 * bc);
      REQUIRE(std::abs(t.triangle.b() - ca) <= 1e-10 * ca);
      REQUIRE(std::abs(t.triangle.c() - ab) <= 1e-10 * ab);
      const TriangleAngles law = angles_from_sides(t.triangle);
      REQUIRE(std::abs(law.alpha() - t.angles.alpha()) <= 1e-10);
      REQUIRE(std::abs(law.beta() - t.angles.beta()) <= 1e-10);
      switch (f) {
        case Family::pinned:
          REQUIRE(t.triangle.c() < t.triangle.b());
          REQUIRE(t.triangle.a() < 2 * t.triangle.b());
          REQUIRE(t.A.x == 0.0);
          break;
        case Family::staked:
        case Family::anchored: REQUIRE(t.C.y > 0.0); break;
        case Family::uniform_t:
          REQUIRE(t.triangle.c() == 1.0);
          REQUIRE(t.angles.alpha() + t.angles.beta() < kPi);
          break;
      }
    }
  }
  CHECK(diag.resamples == 0);
}

TEST_CASE("pinned means at 10^6") {
  const auto draws = sample_many(Family::pinned, 1000000, RandomStream(kSeed, 20));
  const MeanSe c = mean_of(draws, [](const TriangleSample& t) { return t.triangle.c(); });
  CHECK(std::abs(c.mean - 0.5) <= 3 * c.se);
  const MeanSe b2 = mean_of(draws, [](const TriangleSample& t) { return t.triangle.b() * t.triangle.b(); });
  CHECK(std::abs(b2.mean - 2 / kPi) <= 3 * b2.se);
}

TEST_CASE("pinned c^2 and b^2 - c^2 are Exponential(pi)") {
  const auto draws = sample_many(Family::pinned, 100000, RandomStream(kSeed, 21));
  const auto expo = [](double x) { return x > 0 ? 1 - std::exp(-kPi * x) : 0.0; };
  const auto c2 = collect(draws, [](const TriangleSample& t) { return t.triangle.c() * t.triangle.c(); });
  const auto gap = collect(draws, [](const TriangleSample& t) {
    return t.triangle.b() * t.triangle.b() - t.triangle.c() * t.triangle.c();
  });
  CHECK(ks_one_sample(c2, expo, 0.001).pass);
  CHECK(ks_one_sample(gap, expo, 0.001).pass);
}

TEST_CASE("staked: beta mean, acuteness, uniform alpha") {
  const auto draws = sample_many(Family::staked, 1000000, RandomStream(kSeed, 22));
  const MeanSe beta = mean_of(draws, [](const TriangleSample& t) { return t.angles.beta(); });
  CHECK(std::abs(beta.mean - 0.34306160) <= 3 * beta.se);
  const MeanSe acute = mean_of(draws, [](const TriangleSample& t) { return t.angles.max() < kPi / 2 ? 1.0 : 0.0; });
  CHECK(std::abs(acute.mean - 0.1725524698) <= 3 * acute.se);
  const std::vector<TriangleSample> head(draws.begin(), draws.begin() + 100000);
  const auto alpha = collect(head, [](const TriangleSample& t) { return t.angles.alpha(); });
  CHECK(ks_one_sample(alpha, [](double x) { return std::clamp(x / kPi, 0.0, 1.0); }, 0.001).pass);
}

TEST_CASE("anchored: alpha mean, acuteness, non-uniform alpha, exchangeability") {
  const auto draws = sample_many(Family::anchored, 1000000, RandomStream(kSeed, 23));
  const MeanSe alpha = mean_of(draws, [](const TriangleSample& t) { return t.angles.alpha(); });
  CHECK(std::abs(alpha.mean - 0.71706372) <= 3 * alpha.se);
  const MeanSe acute = mean_of(draws, [](const TriangleSample& t) { return t.angles.max() < kPi / 2 ? 1.0 : 0.0; });
  CHECK(std::abs(acute.mean - 0.2458467223) <= 3 * acute.se);
  const std::vector<TriangleSample> first(draws.begin(), draws.begin() + 100000);
  const std::vector<TriangleSample> second(draws.begin() + 100000, draws.begin() + 200000);
  const auto a = collect(first, [](const TriangleSample& t) { return t.angles.alpha(); });
  CHECK_FALSE(ks_one_sample(a, [](double x) { return std::clamp(x / kPi, 0.0, 1.0); }, 0.001).pass);
  // independent halves, so the two samples are independent
  const auto b = collect(second, [](const TriangleSample& t) { return t.angles.beta(); });
  CHECK(ks_two_sample(a, b, 0.001).pass);
}

TEST_CASE("uniform T joint angle density is flat") {
  const auto draws = sample_many(Family::uniform_t, 100000, RandomStream(kSeed, 24));
  std::vector<std::pair<double, double>> pts;
  for (const auto& t : draws) pts.emplace_back(t.angles.alpha(), t.angles.beta());
  CHECK(chi_square_region(pts, [](double, double) { return 2 / (kPi * kPi); }, 0.001).pass);
}

TEST_CASE("literal Poisson-process oracle") {
  const auto oracle = sample_many(&sample_pinned_oracle, 100000, RandomStream(kSeed, 25));
  const auto direct = sample_many(Family::pinned, 100000, RandomStream(kSeed, 26));
  for (int side = 0; side < 3; ++side) {
    auto pick = [side](const TriangleSample& t) {
      return side == 0 ? t.triangle.a() : side == 1 ? t.triangle.b() : t.triangle.c();
    };
    CHECK(ks_two_sample(collect(oracle, pick), collect(direct, pick), 0.001).pass);
  }
  const MeanSe b = mean_of(oracle, [](const TriangleSample& t) { return t.triangle.b(); });
  CHECK(std::abs(b.mean - 0.75) <= 3 * b.se);
}

TEST_CASE("sampler marginals against catalog densities") {
  const auto pinned = sample_many(Family::pinned, 100000, RandomStream(kSeed, 27));
  struct Cell {
    DensityKind kind;
    double (*pick)(const TriangleSample&);
  };
  const std::vector<Cell> cells = {
      {DensityKind::pinned_a, [](const TriangleSample& t) { return t.triangle.a(); }},
      {DensityKind::pinned_alpha, [](const TriangleSample& t) { return t.angles.alpha(); }},
      {DensityKind::pinned_beta, [](const TriangleSample& t) { return t.angles.beta(); }},
      {DensityKind::pinned_gamma, [](const TriangleSample& t) { return t.angles.gamma(); }},
      {DensityKind::ratio_c_over_a, [](const TriangleSample& t) { return t.triangle.c() / t.triangle.a(); }},
  };
  for (const auto& cell : cells) {
    INFO(to_string(cell.kind));
    CHECK(ks_one_sample(collect(pinned, cell.pick), TabulatedCdf(law_for(cell.kind)), 0.001).pass);
  }
  const auto staked = sample_many(Family::staked, 100000, RandomStream(kSeed, 28));
  CHECK(ks_one_sample(collect(staked, [](const TriangleSample& t) { return t.angles.beta(); }),
                      TabulatedCdf(staked_angle_law(Angle::beta)), 0.001)
            .pass);
}

TEST_CASE("block-wise sampling reproduces sample_many") {
  const RandomStream base(kSeed, 42);
  // not a multiple of the chunk or block size
  const std::size_t n = 3 * 4096 * 5 + 777;
  const auto all = sample_many(Family::staked, n, base, 2);
  std::vector<TriangleSample> joined;
  std::size_t blocks = 0;
  sample_blocks(Family::staked, n, base, 3,
                [&](std::span<const TriangleSample> b) {
                  joined.insert(joined.end(), b.begin(), b.end());
                  ++blocks;
                },
                5);
  CHECK(blocks == 4);
  REQUIRE(joined.size() == all.size());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(joined[i].C.x == all[i].C.x);
    CHECK(joined[i].C.y == all[i].C.y);
  }
}
