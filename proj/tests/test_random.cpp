#include <cmath>
#include <vector>

#include "doctest.h"
#include "poistri/random.hpp"

using namespace poistri;

TEST_CASE("philox4x64-10 known-answer vectors") {
  const auto zero = philox4x64({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x16554d9eca36314cULL);
  CHECK(zero[1] == 0xdb20fe9d672d0fdcULL);
  CHECK(zero[2] == 0xd7e772cee186176bULL);
  CHECK(zero[3] == 0x7e68b68aec7ba23bULL);
  const std::uint64_t m = ~0ULL;
  const auto ones = philox4x64({m, m, m, m}, {m, m});
  CHECK(ones[0] == 0x87b092c3013fe90bULL);
  CHECK(ones[1] == 0x438c3c67be8d0224ULL);
  CHECK(ones[2] == 0x9cc7d7c69cd777b6ULL);
  CHECK(ones[3] == 0xa09caebf594f0ba0ULL);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RandomStream s0 = RandomStream(1, 2).substream(0), s1 = RandomStream(1, 2).substream(1);
  CHECK(s0.next_u64() != s1.next_u64());
}

TEST_CASE("uniform ranges and moments") {
  RandomStream rng(3, 0);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = rng.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum2 / n - 1.0 / 3) < 0.003);
}

TEST_CASE("poisson variates have matching mean and variance") {
  for (double mean : {0.5, 12.566, 150.0}) {
    RandomStream rng(9, 1);
    const int n = 40000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n, var = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 4 * std::sqrt(mean / n));
    CHECK(var == doctest::Approx(mean).epsilon(0.05));
  }
}
