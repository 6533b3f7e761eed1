#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Nothing here calls into the code under test except to build inputs.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "zdkit/evolution.hpp"
#include "zdkit/game.hpp"
#include "zdkit/stp.hpp"

namespace fixtures {

// Three-player game with k = [2, 3, 2] used for pinning.
inline const std::vector<std::vector<double>> kPinningPayoffs = {
    {-3, -0.5, 6, 9, 8, 7, -4, -4.5, 5, 6.5, 5, 7},
    {4, -1, -5, 7.5, 2, 3.5, 8, -4, 5, 8, 9, -2},
    {9, 5, -6, -5.5, 5.5, 8, 8.5, 5.5, 0, -3.5, 4.5, 7},
};

// Same shape, used for extortion. Entry 7 of player 2 is -4 (see the extortion rows below).
inline const std::vector<std::vector<double>> kExtortionPayoffs = {
    {16, 11, -4, -8, -2, -10.3, 11.4, 18.5, 1.2, -3, -2.5, 1.5},
    {3, 2, -1, 0, 5, -6, -4, 3, 3, 1, -1, 7},
    {-2.9, 0, 6.8, 7.1, 2, -9.4, -8.2, 0.4, 4.6, 6.1, -2, 2.3},
};

// Reference pinning rows of player 2.
inline const std::vector<double> kPinningRow1 = {0.3, 0.55, 0.2, 0.5, 0.4, 0.3, 0.2, 0.15, 0.1, 0.25, 0.1, 0.3};
inline const std::vector<double> kPinningRow2 = {0.6, 0.2, 0.1, 0.15, 0.25, 0.5, 0.55, 0.25, 0.7, 0.35, 0.15, 0.4};

// Reference extortion rows of player 2.
inline const std::vector<double> kExtortionRow1 = {0.275, 0.5,   0.175,  0.445, 0.365,  0.2715,
                                                   0.178, 0.1375, 0.0890, 0.22, 0.0925, 0.2725};
inline const std::vector<double> kExtortionRow2 = {0.668, 0.22,  0.104, 0.168, 0.28, 0.548,
                                                   0.604, 0.272, 0.768, 0.388, 0.16, 0.444};

inline zdkit::Game pinning_game() { return zdkit::Game({2, 3, 2}, kPinningPayoffs); }
inline zdkit::Game extortion_game() { return zdkit::Game({2, 3, 2}, kExtortionPayoffs); }

}  // namespace fixtures

namespace oracle {

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Strategy of each player in a 1-based profile, decoded by repeated division
// with the last player varying fastest.
inline std::vector<int> decode(const std::vector<int>& counts, std::size_t profile) {
  std::vector<int> s(counts.size());
  std::size_t rest = profile - 1;
  for (std::size_t i = counts.size(); i-- > 0;) {
    s[i] = static_cast<int>(rest % static_cast<std::size_t>(counts[i])) + 1;
    rest /= static_cast<std::size_t>(counts[i]);
  }
  return s;
}

inline std::size_t profile_count(const std::vector<int>& counts) {
  std::size_t k = 1;
  for (int c : counts) k *= static_cast<std::size_t>(c);
  return k;
}

// L(t, s) = prod_i P_i(s_i(t) | s), straight from the definition of independent play.
inline zdkit::DenseMatrix transition(const std::vector<int>& counts, const std::vector<zdkit::DenseMatrix>& rules) {
  const std::size_t kappa = profile_count(counts);
  zdkit::DenseMatrix l(kappa, kappa);
  for (std::size_t t = 1; t <= kappa; ++t) {
    const auto next = decode(counts, t);
    for (std::size_t s = 1; s <= kappa; ++s) {
      double p = 1.0;
      for (std::size_t i = 0; i < counts.size(); ++i) p *= rules[i](static_cast<std::size_t>(next[i] - 1), s - 1);
      l(t - 1, s - 1) = p;
    }
  }
  return l;
}

// Random column-stochastic k x kappa matrix with entries bounded away from zero.
inline zdkit::DenseMatrix random_rule(std::size_t k, std::size_t kappa, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  zdkit::DenseMatrix m(k, kappa);
  for (std::size_t c = 0; c < kappa; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) sum += (m(r, c) = u(rng));
    for (std::size_t r = 0; r < k; ++r) m(r, c) /= sum;
  }
  return m;
}

inline zdkit::DenseMatrix random_stochastic(std::size_t n, std::mt19937_64& rng) { return random_rule(n, n, rng); }

// Stationary vector by plain repeated multiplication from the uniform start.
inline std::vector<double> iterate_stationary(const zdkit::DenseMatrix& l, std::size_t steps = 200000) {
  const std::size_t n = l.rows();
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  for (std::size_t it = 0; it < steps; ++it) {
    double change = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) acc += l(r, c) * x[c];
      y[r] = acc;
      change = std::max(change, std::abs(y[r] - x[r]));
    }
    x.swap(y);
    if (change < 1e-15) break;
  }
  return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace oracle
