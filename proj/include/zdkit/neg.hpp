#pragma once

// Networked evolutionary games seen from one node: all neighbours are merged
// into a fictitious opponent player whose strategies are the neighbour
// action counts (d_1..d_k). The result is an ordinary two-player game, so
// ZD design applies unchanged.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zdkit/game.hpp"
#include "zdkit/zd_design.hpp"

namespace zdkit {

// payoff[a][b] = (payoff to the player using a, payoff to the player using b), 0-based.
struct BiMatrix {
  int strategies = 0;
  std::vector<std::vector<std::pair<double, double>>> payoff;
  std::optional<std::vector<std::string>> labels;

  bool operator==(const BiMatrix&) const = default;
};

class NetworkGame {
 public:
  // Validates a simple undirected graph in which every node has degree >= 1.
  NetworkGame(std::vector<std::string> nodes, std::vector<std::pair<std::size_t, std::size_t>> edges, BiMatrix base);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const BiMatrix& base() const noexcept { return base_; }
  std::size_t node_index(const std::string& name) const;
  std::size_t degree(std::size_t node) const { return degree_.at(node); }

  bool operator==(const NetworkGame&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  BiMatrix base_;
  std::vector<std::size_t> degree_;
};

// Count vectors (d_1..d_k) with sum = degree, most strategy-1 first.
std::vector<std::vector<int>> opponent_strategy_set(int strategies, int degree);

struct FOPGame {
  std::string focal;
  std::size_t degree = 0;
  std::vector<std::vector<int>> opponent_profiles;
  Game game;  // player 1 = focal node, player 2 = fictitious opponent
};

FOPGame reduce_to_fop(const NetworkGame& net, const std::string& node);

// The base bi-matrix as a plain two-player game.
Game bimatrix_game(const BiMatrix& base);

// Pin the fictitious opponent's expected payoff to value using the focal node's row.
ZDAssignment fop_pinning(const FOPGame& fop, double value, double mu, int strategy = 1);
// Ec_focal - reference = factor (Ec_opponent - reference).
ZDAssignment fop_extortion(const FOPGame& fop, double reference, double factor, double mu, int strategy = 1);

}  // namespace zdkit
