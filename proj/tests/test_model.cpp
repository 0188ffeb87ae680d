#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gsfluct/model.hpp"

using namespace gsfluct;

namespace {

// Independent enumeration oracle: loopless reflected mixed-radix Gray code
// (digits change one at a time, order unrelated to the production counter),
// naive per-state energy, plain extended-precision accumulation.
template <class Visit>
void gray_code_enumerate(int n, int levels, Visit&& visit) {
  std::vector<int> digit(n, 0);
  std::vector<int> focus(n + 1);
  std::vector<int> dir(n, 1);
  for (int j = 0; j <= n; ++j) focus[j] = j;
  for (;;) {
    visit(digit);
    const int j = focus[0];
    focus[0] = 0;
    if (j == n) break;
    digit[j] += dir[j];
    if (digit[j] == 0 || digit[j] == levels - 1) {
      dir[j] = -dir[j];
      focus[j] = focus[j + 1];
      focus[j + 1] = j + 1;
    }
  }
}

double naive_energy(const std::vector<int>& sigma, const DisorderSample& dis,
                    const ModelParams& params) {
  const int n = params.n_sites;
  double e = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++idx) {
      e += params.beta / std::sqrt(double(n)) * dis.couplings[idx] * sigma[i] * sigma[j];
    }
  }
  for (int i = 0; i < n; ++i) e += params.D * sigma[i] * sigma[i] + params.h * sigma[i];
  return e;
}

double gray_log_partition(const DisorderSample& dis, const ModelParams& params) {
  long double z = 0.0L;
  gray_code_enumerate(params.n_sites, params.levels(), [&](const std::vector<int>& digit) {
    std::vector<int> sigma(digit.size());
    for (std::size_t i = 0; i < digit.size(); ++i) sigma[i] = digit[i] - params.spin_cap;
    z += std::exp(static_cast<long double>(naive_energy(sigma, dis, params)));
  });
  return static_cast<double>(std::log(z));
}

}  // namespace

TEST_CASE("params validation and enumeration guard") {
  CHECK_THROWS_AS(ModelParams(0, 4, 0.1, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 0, 0.1, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 4, -0.1, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1, 4, 0.1, -0.2, 0.0), std::invalid_argument);
  // 3^32 blows straight through the default cap of 2^31 states
  CHECK_THROWS_AS(ModelParams(1, 32, 0.1, 0.0, 0.0), std::invalid_argument);
  // but an explicit larger cap admits it
  const ModelParams big(1, 21, 0.1, 0.0, 0.0, std::uint64_t{1} << 34);
  CHECK(big.state_count() == 10460353203ull);
}

TEST_CASE("hamiltonian matches hand-evaluated cases") {
  SUBCASE("all-zero configuration vanishes") {
    const ModelParams params(1, 3, 0.8, 0.4, -0.3);
    const DisorderSample dis = sample_disorder(11, 3);
    CHECK(hamiltonian({0, 0, 0}, dis, params) == 0.0);
  }
  SUBCASE("beta = 0 decouples the disorder") {
    const ModelParams params(1, 2, 0.0, 0.2, 0.5);
    const DisorderSample dis{{123.0}, 0};
    CHECK(hamiltonian({1, -1}, dis, params) == 1.0);
  }
  SUBCASE("single coupling term") {
    const ModelParams params(1, 2, 1.0, 0.0, 0.0);
    const DisorderSample dis{{0.7}, 0};
    CHECK(hamiltonian({1, 1}, dis, params) == doctest::Approx(0.7 / std::sqrt(2.0)).epsilon(1e-13));
  }
  SUBCASE("dimension mismatch is rejected") {
    const ModelParams params(1, 3, 1.0, 0.0, 0.0);
    const DisorderSample dis = sample_disorder(5, 3);
    CHECK_THROWS_AS(hamiltonian({1, 1}, dis, params), std::invalid_argument);
    CHECK_THROWS_AS(hamiltonian({2, 0, 0}, dis, params), std::invalid_argument);
    const DisorderSample wrong = sample_disorder(5, 4);
    CHECK_THROWS_AS(hamiltonian({1, 1, 1}, wrong, params), std::invalid_argument);
  }
}

TEST_CASE("log_partition closed forms and second-enumeration oracle") {
  SUBCASE("beta = 0 factorizes") {
    const ModelParams params(1, 4, 0.0, 0.0, 0.0);
    const DisorderSample dis = sample_disorder(3, 4);
    CHECK(log_partition(dis, params) == doctest::Approx(4.0 * std::log(3.0)).epsilon(1e-12));
  }
  SUBCASE("single site") {
    const ModelParams params(1, 1, 0.0, 0.0, 1.0);
    const DisorderSample dis{{}, 0};
    CHECK(log_partition(dis, params) ==
          doctest::Approx(std::log(1.0 + 2.0 * std::exp(1.0))).epsilon(1e-12));
  }
  SUBCASE("beta = 0 factorization at general S, D, h") {
    for (int s_cap = 1; s_cap <= 3; ++s_cap) {
      const ModelParams params(s_cap, 5, 0.0, 0.37, -0.21);
      const DisorderSample dis = sample_disorder(9, 5);
      double site = 0.0;
      for (int g = -s_cap; g <= s_cap; ++g) site += std::exp(params.D * g * g + params.h * g);
      CHECK(log_partition(dis, params) == doctest::Approx(5.0 * std::log(site)).epsilon(1e-12));
    }
  }
  SUBCASE("agrees with the Gray-code oracle") {
    const ModelParams params(1, 3, 1.1, 0.3, -0.2);
    const DisorderSample dis = sample_disorder(17, 3);
    const double got = log_partition(dis, params);
    const double expected = gray_log_partition(dis, params);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("order independence at S = 2") {
    const ModelParams params(2, 4, 0.6, 0.1, 0.15);
    const DisorderSample dis = sample_disorder(23, 4);
    CHECK(log_partition(dis, params) ==
          doctest::Approx(gray_log_partition(dis, params)).epsilon(1e-12));
  }
}

TEST_CASE("incremental energies match the naive recomputation") {
  const ModelParams params(2, 5, 0.9, 0.25, -0.4);
  const DisorderSample dis = sample_disorder(31, 5);
  const EnumHamiltonian ham = EnumHamiltonian::from_disorder(dis, params);
  std::uint64_t states = 0;
  for_each_state(ham, [&](const StateView& s) {
    ++states;
    const double reference = ham.energy(s.sigma);
    CHECK(std::abs(s.energy - reference) <= 1e-12 * (1.0 + std::abs(reference)));
    long sum_spin = 0, sum_sq = 0;
    for (int v : s.sigma) {
      sum_spin += v;
      sum_sq += long(v) * v;
    }
    REQUIRE(s.sum_spin == sum_spin);
    REQUIRE(s.sum_sq == sum_sq);
  });
  CHECK(states == params.state_count());
}

TEST_CASE("gibbs expectations") {
  SUBCASE("normalization is exact") {
    const ModelParams params(1, 4, 0.8, 0.3, 0.1);
    const DisorderSample dis = sample_disorder(41, 4);
    const double one = gibbs_expectation([](std::span<const int>) { return 1.0; }, dis, params);
    CHECK(one == 1.0);
  }
  SUBCASE("uniform single-site measure") {
    const ModelParams params(1, 3, 0.0, 0.0, 0.0);
    const DisorderSample dis = sample_disorder(43, 3);
    const double r11 = gibbs_expectation(
        [](std::span<const int> s) {
          double sum = 0.0;
          for (int v : s) sum += double(v) * v;
          return sum / double(s.size());
        },
        dis, params);
    CHECK(r11 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    const double r12 = gibbs_pair_expectation(
        [](std::span<const int> a, std::span<const int> b) {
          double sum = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) sum += double(a[i]) * b[i];
          return sum / double(a.size());
        },
        dis, params);
    CHECK(std::abs(r12) <= 1e-12);
  }
  SUBCASE("linearity in the observable") {
    const ModelParams params(2, 3, 0.5, 0.2, -0.1);
    const DisorderSample dis = sample_disorder(47, 3);
    auto f = [](std::span<const int> s) { return double(s[0]); };
    auto g = [](std::span<const int> s) { return double(s[1]) * s[2]; };
    auto combo = [&](std::span<const int> s) { return 2.0 * f(s) + 3.0 * g(s); };
    const double lhs = gibbs_expectation(combo, dis, params);
    const double rhs =
        2.0 * gibbs_expectation(f, dis, params) + 3.0 * gibbs_expectation(g, dis, params);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
  SUBCASE("spin-flip symmetry kills <R12> at h = 0") {
    const ModelParams params(1, 4, 0.7, 0.0, -0.3);
    const DisorderSample dis = sample_disorder(53, 4);
    const double r12 = gibbs_pair_expectation(
        [](std::span<const int> a, std::span<const int> b) {
          double sum = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) sum += double(a[i]) * b[i];
          return sum / double(a.size());
        },
        dis, params);
    CHECK(std::abs(r12) <= 1e-12);
  }
}

TEST_CASE("factorized replica moments equal brute-force double enumeration") {
  const ModelParams params(1, 3, 0.9, 0.35, 0.05);
  const DisorderSample dis = sample_disorder(59, 3);
  const EnumHamiltonian ham = EnumHamiltonian::from_disorder(dis, params);
  const GibbsSiteStats stats = gibbs_site_stats(ham, true);
  const double q = 0.3;  // any reference value works for the comparison
  const double factorized = stats.r12_sq_mean() - 2.0 * q * stats.r12_mean() + q * q;
  const double brute = gibbs_pair_expectation(
      [&](std::span<const int> a, std::span<const int> b) {
        double r = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) r += double(a[i]) * b[i];
        r /= double(a.size());
        return (r - q) * (r - q);
      },
      dis, params);
  CHECK(factorized == doctest::Approx(brute).epsilon(1e-12));

  const double r11_brute = gibbs_expectation(
      [](std::span<const int> s) {
        double sum = 0.0;
        for (int v : s) sum += double(v) * v;
        return sum / double(s.size());
      },
      dis, params);
  CHECK(stats.r11_mean == doctest::Approx(r11_brute).epsilon(1e-12));
  CHECK(stats.log_z == doctest::Approx(log_partition(dis, params)).epsilon(1e-13));
}

TEST_CASE("overlaps") {
  SUBCASE("aligned configurations") {
    const OverlapStats o = overlaps({1, 1, 1, 1}, {1, 1, 1, 1});
    CHECK(o.r == 1.0);
    CHECK(o.u == 0.25);
  }
  SUBCASE("zero partner") {
    const OverlapStats o = overlaps({1, -1, 1}, {0, 0, 0});
    CHECK(o.r == 0.0);
    CHECK(o.u == 0.0);
  }
  SUBCASE("hand-computed mixed case") {
    const OverlapStats o = overlaps({2, -1}, {1, 1});
    CHECK(o.r == 0.5);
    CHECK(o.u == 1.25);
  }
  SUBCASE("length mismatch") { CHECK_THROWS_AS(overlaps({1, 1}, {1}), std::invalid_argument); }
  SUBCASE("bounds hold on random pairs") {
    const ModelParams params(2, 6, 0.3, 0.0, 0.0);
    for (std::uint64_t k = 0; k < 500; ++k) {
      const SpinConfiguration a = random_configuration(params, 1000 + k);
      const SpinConfiguration b = random_configuration(params, 2000 + k);
      const OverlapStats o = overlaps(a, b);
      CHECK(std::abs(o.r) <= 4.0);          // S^2
      CHECK(o.u >= 0.0);
      CHECK(o.u <= 16.0 / 6.0 + 1e-15);     // S^4 / N
    }
  }
}

TEST_CASE("coupling covariance identity") {
  SUBCASE("zero configurations") {
    const ModelParams params(1, 3, 1.0, 0.0, 0.0);
    const CovarianceCheck c = coupling_covariance_check({0, 0, 0}, {0, 0, 0}, params);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
  }
  SUBCASE("aligned ones at N = 3") {
    const ModelParams params(1, 3, 1.0, 0.0, 0.0);
    const CovarianceCheck c = coupling_covariance_check({1, 1, 1}, {1, 1, 1}, params);
    CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("identity fuzz at S = 2, N = 6") {
    const ModelParams params(2, 6, 1.3, 0.0, 0.0);
    for (std::uint64_t k = 0; k < 1000; ++k) {
      const SpinConfiguration a = random_configuration(params, 5000 + k);
      const SpinConfiguration b = random_configuration(params, 6000 + k);
      const CovarianceCheck c = coupling_covariance_check(a, b, params);
      CHECK(std::abs(c.lhs - c.rhs) <= 1e-12);
    }
  }
}

TEST_CASE("disorder sampling is seed-addressable") {
  const DisorderSample a = sample_disorder(77, 6);
  const DisorderSample b = sample_disorder(77, 6);
  CHECK(a.couplings == b.couplings);
  CHECK(a.couplings.size() == 15);
  // moments over many edges
  const DisorderSample big = sample_disorder(78, 120);
  double sum = 0.0, sum_sq = 0.0;
  for (double g : big.couplings) {
    sum += g;
    sum_sq += g * g;
  }
  const double n = double(big.couplings.size());
  CHECK(std::abs(sum / n) < 3.0 / std::sqrt(n));
  CHECK(std::abs(sum_sq / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}
