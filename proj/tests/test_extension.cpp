#include <catch2/catch.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "fradex/extension.hpp"

using fradex::DirichletIndexMap;
using fradex::NeumannIndexMap;

namespace {

// tabulation oracle straight from the case definition: mirror once about the
// left wall, then shift toward the base window period by period
int neumann_oracle(std::int64_t j, std::int64_t n_max) {
  if (j >= 0 && j <= n_max) return static_cast<int>(j);
  if (j >= -n_max - 1 && j <= -1) return static_cast<int>(-j - 1);
  const std::int64_t p = 2 * (n_max + 1);
  return neumann_oracle(j > n_max ? j - p : j + p, n_max);
}

struct SignedRef {
  int index;
  int sign;
};

// base vector v_0..v_{N+1}; odd reflection about the right endpoint, period 2N+2
SignedRef dirichlet_oracle(std::int64_t j, std::int64_t n_max) {
  if (j >= 0 && j <= n_max + 1) return {static_cast<int>(j), +1};
  if (j >= n_max + 2 && j <= 2 * n_max + 1)
    return {static_cast<int>(2 * (n_max + 1) - j), -1};
  const std::int64_t p = 2 * (n_max + 1);
  return dirichlet_oracle(j > 2 * n_max + 1 ? j - p : j + p, n_max);
}

} // namespace

TEST_CASE("neumann map spec points") {
  NeumannIndexMap m(4); // base v_0..v_3, N = 3
  CHECK(m.period() == 8);
  CHECK(m.map(4) == 3);   // v_4 mirrors v_3
  CHECK(m.map(-1) == 0);  // v_{-1} mirrors v_0
  CHECK(m.map(12) == 3);  // wraps to -4, mirrors to 3
  for (std::int64_t j = 0; j <= 3; ++j) CHECK(m.map(j) == static_cast<std::size_t>(j));
}

TEST_CASE("dirichlet map spec points") {
  DirichletIndexMap m(4); // base v_0..v_3 with zero endpoints, N = 2
  CHECK(m.period() == 6);
  auto s = m.map(4);
  CHECK(s.index == 2);
  CHECK(s.sign == -1);
  s = m.map(1);
  CHECK(s.index == 1);
  CHECK(s.sign == +1);
  s = m.map(-2);
  CHECK(s.index == 2);
  CHECK(s.sign == -1);
}

TEST_CASE("sampling through the maps") {
  const std::vector<double> v{5.0, 7.0};
  NeumannIndexMap n(2); // N = 1, period 4
  CHECK(n.sample(v, 2) == 7.0);

  const std::vector<double> d{0.0, 3.0, 0.0};
  DirichletIndexMap dm(3); // N = 1, period 4
  CHECK(dm.sample(d, 3) == -3.0);

  const std::vector<double> wrong{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(n.sample(wrong, 0), std::invalid_argument);
  CHECK_THROWS_AS(dm.sample(v, 0), std::invalid_argument);
}

TEST_CASE("exhaustive agreement with the tabulated extension") {
  for (int n_max : {1, 2, 3, 7}) {
    NeumannIndexMap nm(static_cast<std::size_t>(n_max) + 1);
    DirichletIndexMap dm(static_cast<std::size_t>(n_max) + 2);
    const std::int64_t p = 2 * (n_max + 1);
    for (std::int64_t j = -4 * p; j <= 4 * p; ++j) {
      CHECK(static_cast<int>(nm.map(j)) == neumann_oracle(j, n_max));
      const auto got = dm.map(j);
      const auto want = dirichlet_oracle(j, n_max);
      // sign at the zero-valued endpoints is immaterial
      CHECK(static_cast<int>(got.index) == want.index);
      if (want.index != 0 && want.index != n_max + 1) CHECK(got.sign == want.sign);
    }
  }
}

TEST_CASE("periodicity and mirror symmetries") {
  for (int n_max : {1, 3, 7}) {
    NeumannIndexMap nm(static_cast<std::size_t>(n_max) + 1);
    DirichletIndexMap dm(static_cast<std::size_t>(n_max) + 2);
    const std::int64_t p = 2 * (n_max + 1);
    for (std::int64_t j = -3 * p; j <= 3 * p; ++j) {
      CHECK(nm.map(j) == nm.map(j + p));
      CHECK(nm.map(j) == nm.map(-j - 1)); // even about the left wall
      const auto a = dm.map(j);
      const auto b = dm.map(j + p);
      CHECK(a.index == b.index);
      CHECK(a.sign == b.sign);
    }
  }
}

TEST_CASE("dirichlet samples are odd about the right endpoint") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n_max = 5;
  std::vector<double> v(n_max + 2);
  for (int i = 1; i <= n_max; ++i) v[i] = dist(rng);
  v.front() = v.back() = 0.0;
  DirichletIndexMap dm(v.size());
  for (std::int64_t j = -20; j <= 20; ++j)
    CHECK(dm.sample(v, j) == -dm.sample(v, 2 * (n_max + 1) - j));
}

TEST_CASE("neumann samples are periodic in the extended index") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(6);
  for (auto& x : v) x = dist(rng);
  NeumannIndexMap nm(v.size());
  for (std::int64_t j = -25; j <= 25; ++j)
    CHECK(nm.sample(v, j) == nm.sample(v, j + nm.period()));
}

TEST_CASE("degenerate sizes are rejected") {
  CHECK_THROWS_AS(NeumannIndexMap(0), std::invalid_argument);
  CHECK_THROWS_AS(DirichletIndexMap(1), std::invalid_argument);
}
