#pragma once

// Sample-path simulation of x(t+1) = L x(t), used as an oracle that does not
// go through any linear solve.
//
// Random stream: std::mt19937_64 seeded with the caller's seed; each step
// draws one 53-bit uniform (top bits of a single 64-bit output) and inverts
// the column's cumulative distribution. The first floor(T/10) samples are
// discarded before statistics are taken.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zdkit/game.hpp"
#include "zdkit/stp.hpp"

namespace zdkit {

struct Trajectory {
  std::uint64_t seed = 0;
  std::size_t length = 0;
  std::size_t burn_in = 0;
  std::vector<std::size_t> visited;  // x(1)..x(T), 1-based profile indices
  std::vector<double> empirical;     // frequencies after burn-in
  std::vector<double> payoffs;       // V_m . empirical, when payoff vectors were given
};

Trajectory simulate(const DenseMatrix& l, std::size_t start, std::size_t steps, std::uint64_t seed,
                    std::span<const std::vector<double>> payoff_vectors = {});

// Runs independent chains with seeds seed, seed+1, ... and merges their
// post-burn-in counts.
Trajectory simulate_parallel(const DenseMatrix& l, std::size_t start, std::size_t steps, std::uint64_t seed,
                             std::size_t chains, std::span<const std::vector<double>> payoff_vectors = {});

struct ComparisonReport {
  std::vector<double> deviations;  // empirical - exact, per profile
  std::vector<double> sigmas;      // standard error per profile
  std::vector<double> z_scores;
  std::vector<double> payoff_gaps;  // empirical - exact expected payoff, per player
  double max_z = 0.0;
  bool pass = false;
};

// Standard errors use the chain's asymptotic variance when the transition
// matrix is supplied, and the binomial u(1-u)/N otherwise.
ComparisonReport compare_empirical_vs_exact(const Trajectory& trajectory, std::span<const double> exact,
                                            std::span<const std::vector<double>> payoff_vectors, double z_threshold,
                                            const DenseMatrix* transition = nullptr);

// Asymptotic variance of the visit frequency of each state for a chain with
// stationary vector u: u_s (1 - u_s) + 2 u_s D_ss, D = (I - L + u 1^T)^{-1} - I.
std::vector<double> frequency_variances(const DenseMatrix& l, std::span<const double> stationary);

}  // namespace zdkit
