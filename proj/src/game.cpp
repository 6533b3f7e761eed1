#include "zdkit/game.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "zdkit/error.hpp"

namespace zdkit {

ProfileIndexer::ProfileIndexer(std::vector<int> strategy_counts) : counts_(std::move(strategy_counts)) {
  if (counts_.empty()) fail(ErrorKind::domain, "strategy count list is empty");
  const int n = players();
  prefix_.assign(n, 1);
  suffix_.assign(n + 1, 1);
  for (int i = 0; i < n; ++i) {
    if (counts_[i] < 2) {
      fail(ErrorKind::domain, "player " + std::to_string(i + 1) + " has " + std::to_string(counts_[i]) +
                                  " strategies; at least 2 are required");
    }
    const auto k = static_cast<std::size_t>(counts_[i]);
    if (kappa_ > std::numeric_limits<std::size_t>::max() / k) fail(ErrorKind::capacity, "profile count overflow");
    prefix_[i] = kappa_;
    kappa_ *= k;
  }
  for (int i = n - 1; i >= 1; --i) suffix_[i] = suffix_[i + 1] * static_cast<std::size_t>(counts_[i]);
  suffix_[0] = 0;
}

int ProfileIndexer::strategy_count(int player) const {
  if (player < 1 || player > players()) {
    fail(ErrorKind::domain, "player " + std::to_string(player) + " outside 1.." + std::to_string(players()));
  }
  return counts_[player - 1];
}

std::size_t ProfileIndexer::prefix_product(int i) const {
  if (i < 1 || i > players()) fail(ErrorKind::domain, "kappa_(" + std::to_string(i) + ") undefined");
  return prefix_[i - 1];
}

std::size_t ProfileIndexer::suffix_product(int i) const {
  if (i < 0 || i > players()) fail(ErrorKind::domain, "kappa^(" + std::to_string(i) + ") undefined");
  return suffix_[i];
}

std::size_t ProfileIndexer::encode(std::span<const int> strategies) const {
  if (strategies.size() != counts_.size()) {
    fail(ErrorKind::dimension, "profile has " + std::to_string(strategies.size()) + " components, game has " +
                                   std::to_string(counts_.size()) + " players");
  }
  std::size_t index = 1;
  for (int i = 0; i < players(); ++i) {
    const int s = strategies[i];
    if (s < 1 || s > counts_[i]) {
      fail(ErrorKind::domain, "strategy " + std::to_string(s) + " of player " + std::to_string(i + 1) + " outside 1.." +
                                  std::to_string(counts_[i]));
    }
    index += static_cast<std::size_t>(s - 1) * suffix_[i + 1];
  }
  return index;
}

std::vector<int> ProfileIndexer::decode(std::size_t profile) const {
  if (profile < 1 || profile > kappa_) {
    fail(ErrorKind::domain, "profile " + std::to_string(profile) + " outside 1.." + std::to_string(kappa_));
  }
  std::vector<int> out(counts_.size());
  std::size_t rest = profile - 1;
  for (int i = players() - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(counts_[i]);
    out[i] = static_cast<int>(rest % k) + 1;
    rest /= k;
  }
  return out;
}

void ProfileIndexer::check_pair(int player, int strategy) const {
  const int k = strategy_count(player);
  if (strategy < 1 || strategy > k) {
    fail(ErrorKind::domain, "strategy " + std::to_string(strategy) + " of player " + std::to_string(player) +
                                " outside 1.." + std::to_string(k));
  }
}

std::vector<std::size_t> ProfileIndexer::phi(int player, int strategy) const {
  check_pair(player, strategy);
  std::vector<std::size_t> out;
  out.reserve(kappa_ / static_cast<std::size_t>(counts_[player - 1]));
  for (std::size_t s = 1; s <= kappa_; ++s) {
    // Component i of profile s is ((s-1) / kappa^(i)) mod k_i + 1.
    const auto component = ((s - 1) / suffix_[player]) % static_cast<std::size_t>(counts_[player - 1]) + 1;
    if (component == static_cast<std::size_t>(strategy)) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> ProfileIndexer::phi_closed_form(int player, int strategy) const {
  check_pair(player, strategy);
  const std::size_t block = suffix_[player - 1];  // kappa^(i-1); 0 for i = 1 where alpha has one value
  const std::size_t stride = suffix_[player];
  std::vector<std::size_t> out;
  for (std::size_t alpha = 1; alpha <= prefix_[player - 1]; ++alpha)
    for (std::size_t beta = 1; beta <= stride; ++beta)
      out.push_back((alpha - 1) * block + static_cast<std::size_t>(strategy - 1) * stride + beta);
  return out;
}

std::vector<double> ProfileIndexer::xi(int player, int strategy) const {
  std::vector<double> row(kappa_, 0.0);
  for (std::size_t s : phi(player, strategy)) row[s - 1] = 1.0;
  return row;
}

Game::Game(std::vector<int> strategy_counts, std::vector<std::vector<double>> payoffs,
           std::optional<std::vector<std::vector<std::string>>> labels)
    : indexer_(std::move(strategy_counts)), payoffs_(std::move(payoffs)), labels_(std::move(labels)) {
  const int n = indexer_.players();
  if (n < 2) fail(ErrorKind::domain, "a game needs at least 2 players");
  if (static_cast<int>(payoffs_.size()) != n) {
    fail(ErrorKind::dimension, "expected " + std::to_string(n) + " payoff vectors, got " + std::to_string(payoffs_.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (payoffs_[i].size() != indexer_.profile_count()) {
      fail(ErrorKind::dimension, "payoff vector of player " + std::to_string(i + 1) + " has " +
                                     std::to_string(payoffs_[i].size()) + " entries, expected " +
                                     std::to_string(indexer_.profile_count()));
    }
    for (double v : payoffs_[i]) {
      if (!std::isfinite(v)) fail(ErrorKind::domain, "payoff of player " + std::to_string(i + 1) + " is not finite");
    }
  }
  if (labels_) {
    if (static_cast<int>(labels_->size()) != n) fail(ErrorKind::dimension, "labels must list every player");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>((*labels_)[i].size()) != indexer_.strategy_counts()[i]) {
        fail(ErrorKind::dimension, "labels of player " + std::to_string(i + 1) + " do not match its strategy count");
      }
    }
  }
}

const std::vector<double>& Game::payoff(int player) const {
  if (player < 1 || player > players()) {
    fail(ErrorKind::domain, "player " + std::to_string(player) + " outside 1.." + std::to_string(players()));
  }
  return payoffs_[player - 1];
}

double payoff_eval(const Game& game, int player, std::span<const double> distribution, double tol) {
  const auto& v = game.payoff(player);
  if (distribution.size() != v.size()) {
    fail(ErrorKind::dimension, "distribution has " + std::to_string(distribution.size()) + " entries, expected " +
                                   std::to_string(v.size()));
  }
  double total = 0.0;
  double value = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (distribution[s] < -tol) fail(ErrorKind::validation, "distribution has a negative entry");
    total += distribution[s];
    value += v[s] * distribution[s];
  }
  if (std::abs(total - 1.0) > tol) fail(ErrorKind::validation, "distribution does not sum to 1");
  return value;
}

}  // namespace zdkit
