#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gsfluct/rng.hpp"

using namespace gsfluct;

TEST_CASE("counter stream is addressable and reproducible") {
  const std::uint64_t a = rng::at(42, 7);
  CHECK(a == rng::at(42, 7));
  CHECK(a != rng::at(42, 8));
  CHECK(a != rng::at(43, 7));
}

TEST_CASE("splitmix view matches sequential iteration") {
  // at(seed, i) is the i-th output of splitmix64 started from `seed`.
  std::uint64_t state = 42;
  for (std::uint64_t i = 0; i < 16; ++i) {
    state += rng::kGolden;
    CHECK(rng::mix64(state) == rng::at(42, i));
  }
}

TEST_CASE("uniform_open stays strictly inside (0,1)") {
  CHECK(rng::uniform_open(0) > 0.0);
  CHECK(rng::uniform_open(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("below produces values in range") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CHECK(rng::below(9, i, 5) < 5);
  }
}

TEST_CASE("gaussian stream has standard moments") {
  const std::size_t n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = rng::gaussian(123, i);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // 3 sigma bands: se(mean) = 1/sqrt(n), se(var) ~ sqrt(2/n)
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("derived streams decouple") {
  const std::uint64_t s1 = rng::derive(7, rng::kDisorder);
  const std::uint64_t s2 = rng::derive(7, rng::kSiteIncrements);
  CHECK(s1 != s2);
  // correlation across the two streams should be MC-small
  const std::size_t n = 100000;
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += rng::gaussian(s1, i) * rng::gaussian(s2, i);
  CHECK(std::abs(dot / n) < 3.0 / std::sqrt(static_cast<double>(n)));
}
