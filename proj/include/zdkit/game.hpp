#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zdkit {

// Alphabetic profile order over strategy counts k_1..k_n: the last player's
// strategy varies fastest. Players, strategies and profiles are 1-based.
class ProfileIndexer {
 public:
  // Throws domain error on an empty list or any k_i < 2.
  explicit ProfileIndexer(std::vector<int> strategy_counts);

  int players() const noexcept { return static_cast<int>(counts_.size()); }
  int strategy_count(int player) const;
  const std::vector<int>& strategy_counts() const noexcept { return counts_; }
  std::size_t profile_count() const noexcept { return kappa_; }

  // kappa_(i) = prod_{j<i} k_j, with kappa_(1) = 1. Valid for i in 1..n.
  std::size_t prefix_product(int i) const;
  // kappa^(i) = prod_{j>i} k_j, with kappa^(0) = 0 and kappa^(n) = 1. Valid for i in 0..n.
  std::size_t suffix_product(int i) const;

  std::size_t encode(std::span<const int> strategies) const;
  std::vector<int> decode(std::size_t profile) const;

  // Phi_{i,j}: profiles in which player i plays j, ascending.
  std::vector<std::size_t> phi(int player, int strategy) const;
  // The same set enumerated as (alpha-1) kappa^(i-1) + (j-1) kappa^(i) + beta.
  std::vector<std::size_t> phi_closed_form(int player, int strategy) const;
  // 0/1 indicator of phi() over 1..kappa.
  std::vector<double> xi(int player, int strategy) const;

  bool operator==(const ProfileIndexer&) const = default;

 private:
  void check_pair(int player, int strategy) const;

  std::vector<int> counts_;
  std::size_t kappa_ = 1;
  std::vector<std::size_t> prefix_;  // prefix_[i-1] = kappa_(i)
  std::vector<std::size_t> suffix_;  // suffix_[i] = kappa^(i), i = 0..n
};

// Finite normal-form game with one payoff row V_i^c per player, indexed by profile.
class Game {
 public:
  Game(std::vector<int> strategy_counts, std::vector<std::vector<double>> payoffs,
       std::optional<std::vector<std::vector<std::string>>> labels = std::nullopt);

  const ProfileIndexer& indexer() const noexcept { return indexer_; }
  int players() const noexcept { return indexer_.players(); }
  std::size_t profile_count() const noexcept { return indexer_.profile_count(); }
  int strategy_count(int player) const { return indexer_.strategy_count(player); }
  const std::vector<double>& payoff(int player) const;
  const std::vector<std::vector<double>>& payoffs() const noexcept { return payoffs_; }
  const std::optional<std::vector<std::vector<std::string>>>& labels() const noexcept { return labels_; }

  bool operator==(const Game&) const = default;

 private:
  ProfileIndexer indexer_;
  std::vector<std::vector<double>> payoffs_;
  std::optional<std::vector<std::vector<std::string>>> labels_;
};

// V_i^c . x for a profile distribution x.
double payoff_eval(const Game& game, int player, std::span<const double> distribution, double tol = 1e-9);

}  // namespace zdkit
