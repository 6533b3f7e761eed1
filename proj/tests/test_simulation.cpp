#include <random>

#include "doctest.h"
#include "support.hpp"
#include "zdkit/error.hpp"
#include "zdkit/simulation.hpp"

using zdkit::DenseMatrix;

namespace {

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) { return oracle::max_diff(a, b); }

}  // namespace

TEST_CASE("trajectories are reproducible from the seed") {
  std::mt19937_64 rng(51);
  const auto l = oracle::random_stochastic(5, rng);
  const auto a = zdkit::simulate(l, 1, 10000, 7);
  const auto b = zdkit::simulate(l, 1, 10000, 7);
  const auto c = zdkit::simulate(l, 1, 10000, 8);
  CHECK(a.visited == b.visited);
  CHECK(a.visited != c.visited);
}

TEST_CASE("counts add up") {
  std::mt19937_64 rng(52);
  const auto l = oracle::random_stochastic(4, rng);
  const auto t = zdkit::simulate(l, 2, 12345, 3);
  CHECK(t.visited.size() == 12345);
  CHECK(t.burn_in == 1234);
  double sum = 0.0;
  for (double f : t.empirical) sum += f;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> counted(4, 0.0);
  for (std::size_t i = t.burn_in; i < t.visited.size(); ++i) counted[t.visited[i] - 1] += 1.0;
  for (std::size_t s = 0; s < 4; ++s) CHECK(t.empirical[s] * static_cast<double>(12345 - 1234) == doctest::Approx(counted[s]));
}

TEST_CASE("zero-probability transitions never occur") {
  const auto l = DenseMatrix::from_rows({{0, 0.5, 0}, {1, 0, 1}, {0, 0.5, 0}});
  const auto t = zdkit::simulate(l, 1, 5000, 9);
  std::size_t prev = 1;
  for (std::size_t s : t.visited) {
    CHECK(l(s - 1, prev - 1) > 0.0);
    prev = s;
  }
}

TEST_CASE("empirical frequencies converge toward the stationary vector") {
  std::mt19937_64 rng(53);
  int improved = 0;
  const int chains = 10;
  for (int c = 0; c < chains; ++c) {
    const auto l = oracle::random_stochastic(6, rng);
    const auto u = oracle::iterate_stationary(l);
    const auto short_run = zdkit::simulate(l, 1, 10'000, 100 + static_cast<std::uint64_t>(c));
    const auto long_run = zdkit::simulate(l, 1, 1'000'000, 200 + static_cast<std::uint64_t>(c));
    if (max_deviation(long_run.empirical, u) < max_deviation(short_run.empirical, u)) ++improved;
    const auto cmp = zdkit::compare_empirical_vs_exact(long_run, u, {}, 5.0, &l);
    CHECK(cmp.pass);
  }
  CHECK(improved >= chains - 1);
}

TEST_CASE("chain-corrected variances match batch-means estimates") {
  // A sticky two-state chain: visits are strongly correlated, so the binomial
  // variance understates the spread.
  const auto l = DenseMatrix::from_rows({{0.95, 0.1}, {0.05, 0.9}});
  const std::vector<double> u{2.0 / 3.0, 1.0 / 3.0};
  const auto v = zdkit::frequency_variances(l, u);
  // Closed form for two states: u1 u2 (1 + lambda) / (1 - lambda), lambda = 1 - a - b.
  const double lambda = 1.0 - 0.05 - 0.1;
  CHECK(v[0] == doctest::Approx(u[0] * u[1] * (1 + lambda) / (1 - lambda)).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(v[0]).epsilon(1e-12));
  CHECK(v[0] > u[0] * u[1]);

  std::vector<double> means;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = zdkit::simulate(l, 1, 20000, 1000 + seed);
    means.push_back(t.empirical[0]);
  }
  double m = 0.0, s2 = 0.0;
  for (double x : means) m += x / static_cast<double>(means.size());
  for (double x : means) s2 += (x - m) * (x - m) / static_cast<double>(means.size() - 1);
  const double predicted = v[0] / 18000.0;
  CHECK(s2 / predicted > 0.7);
  CHECK(s2 / predicted < 1.4);
}

TEST_CASE("parallel chains merge counts") {
  std::mt19937_64 rng(54);
  const auto l = oracle::random_stochastic(4, rng);
  const auto merged = zdkit::simulate_parallel(l, 1, 20000, 5, 4);
  CHECK(merged.visited.size() == 80000);
  std::vector<double> pooled(4, 0.0);
  for (std::uint64_t c = 0; c < 4; ++c) {
    const auto single = zdkit::simulate(l, 1, 20000, 5 + c);
    for (std::size_t s = 0; s < 4; ++s) pooled[s] += single.empirical[s] / 4.0;
  }
  CHECK(oracle::max_diff(merged.empirical, pooled) < 1e-12);
}

TEST_CASE("simulation input checks") {
  std::mt19937_64 rng(55);
  const auto l = oracle::random_stochastic(3, rng);
  CHECK_THROWS_AS(zdkit::simulate(l, 0, 10, 1), zdkit::Error);
  CHECK_THROWS_AS(zdkit::simulate(l, 4, 10, 1), zdkit::Error);
  CHECK_THROWS_AS(zdkit::simulate(l, 1, 0, 1), zdkit::Error);
  CHECK_THROWS_AS(zdkit::simulate(DenseMatrix::from_rows({{0.5, 0.5}, {0.6, 0.5}}), 1, 10, 1), zdkit::Error);
  const std::vector<std::vector<double>> wrong{{1.0, 2.0}};
  CHECK_THROWS_AS(zdkit::simulate(l, 1, 10, 1, wrong), zdkit::Error);
}
