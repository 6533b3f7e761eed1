#include "zdkit/neg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "zdkit/error.hpp"

namespace zdkit {

namespace {

void validate_bimatrix(const BiMatrix& base) {
  if (base.strategies < 2) fail(ErrorKind::domain, "base game needs at least 2 strategies");
  const auto k = static_cast<std::size_t>(base.strategies);
  if (base.payoff.size() != k) fail(ErrorKind::dimension, "payoff bi-matrix must have k rows");
  for (const auto& row : base.payoff) {
    if (row.size() != k) fail(ErrorKind::dimension, "payoff bi-matrix must be k x k");
    for (const auto& [a, b] : row)
      if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorKind::domain, "payoff bi-matrix entries must be finite");
  }
  if (base.labels && base.labels->size() != k) fail(ErrorKind::dimension, "base game labels must list every strategy");
}

void enumerate_counts(int strategies, int remaining, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  const auto pos = current.size();
  if (static_cast<int>(pos) == strategies - 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int d = remaining; d >= 0; --d) {
    current.push_back(d);
    enumerate_counts(strategies, remaining - d, current, out);
    current.pop_back();
  }
}

std::string profile_label(const BiMatrix& base, const std::vector<int>& counts) {
  if (base.labels) {
    std::string s;
    for (std::size_t j = 0; j < counts.size(); ++j)
      for (int c = 0; c < counts[j]; ++c) s += (*base.labels)[j];
    return s;
  }
  std::string s = "(";
  for (std::size_t j = 0; j < counts.size(); ++j) s += (j ? "," : "") + std::to_string(counts[j]);
  return s + ")";
}

}  // namespace

NetworkGame::NetworkGame(std::vector<std::string> nodes, std::vector<std::pair<std::size_t, std::size_t>> edges,
                         BiMatrix base)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), base_(std::move(base)), degree_(nodes_.size(), 0) {
  validate_bimatrix(base_);
  if (nodes_.empty()) fail(ErrorKind::domain, "network has no nodes");
  std::set<std::string> names(nodes_.begin(), nodes_.end());
  if (names.size() != nodes_.size()) fail(ErrorKind::domain, "duplicate node names");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [u, v] : edges_) {
    if (u >= nodes_.size() || v >= nodes_.size()) fail(ErrorKind::domain, "edge endpoint is not a node");
    if (u == v) fail(ErrorKind::domain, "self-loop at node " + nodes_[u]);
    if (!seen.insert(std::minmax(u, v)).second) fail(ErrorKind::domain, "duplicate edge " + nodes_[u] + "-" + nodes_[v]);
    ++degree_[u];
    ++degree_[v];
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (degree_[i] == 0) fail(ErrorKind::domain, "node " + nodes_[i] + " has no neighbours");
}

std::size_t NetworkGame::node_index(const std::string& name) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) fail(ErrorKind::domain, "unknown node '" + name + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::vector<int>> opponent_strategy_set(int strategies, int degree) {
  if (strategies < 2) fail(ErrorKind::domain, "opponent strategy set needs k >= 2");
  if (degree < 1) fail(ErrorKind::domain, "opponent strategy set needs degree >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_counts(strategies, degree, current, out);
  return out;
}

FOPGame reduce_to_fop(const NetworkGame& net, const std::string& node) {
  const std::size_t index = net.node_index(node);
  const BiMatrix& base = net.base();
  const int k = base.strategies;
  const auto degree = net.degree(index);
  auto profiles = opponent_strategy_set(k, static_cast<int>(degree));

  std::vector<double> focal;
  std::vector<double> opponent;
  // Focal strategy varies slowest, then the opponent's count profile.
  for (int a = 0; a < k; ++a) {
    for (const auto& counts : profiles) {
      double mine = 0.0;
      double theirs = 0.0;
      for (int b = 0; b < k; ++b) {
        mine += counts[static_cast<std::size_t>(b)] * base.payoff[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].first;
        theirs += counts[static_cast<std::size_t>(b)] * base.payoff[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].second;
      }
      focal.push_back(mine);
      opponent.push_back(theirs);
    }
  }

  std::optional<std::vector<std::vector<std::string>>> labels;
  if (base.labels) {
    std::vector<std::string> fop_labels;
    for (const auto& counts : profiles) fop_labels.push_back(profile_label(base, counts));
    labels = std::vector<std::vector<std::string>>{*base.labels, fop_labels};
  }
  Game game({k, static_cast<int>(profiles.size())}, {std::move(focal), std::move(opponent)}, std::move(labels));
  return {node, degree, std::move(profiles), std::move(game)};
}

Game bimatrix_game(const BiMatrix& base) {
  validate_bimatrix(base);
  const auto k = static_cast<std::size_t>(base.strategies);
  std::vector<double> row_player;
  std::vector<double> col_player;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      row_player.push_back(base.payoff[a][b].first);
      col_player.push_back(base.payoff[a][b].second);
    }
  std::optional<std::vector<std::vector<std::string>>> labels;
  if (base.labels) labels = std::vector<std::vector<std::string>>{*base.labels, *base.labels};
  return Game({base.strategies, base.strategies}, {std::move(row_player), std::move(col_player)}, std::move(labels));
}

ZDAssignment fop_pinning(const FOPGame& fop, double value, double mu, int strategy) {
  const RowSpec spec{strategy, LinearRelation::pinning(2, 2, value), mu};
  return design_assignment(fop.game, 1, std::span(&spec, 1));
}

ZDAssignment fop_extortion(const FOPGame& fop, double reference, double factor, double mu, int strategy) {
  const ExtortionTarget target{strategy, 2, factor, mu};
  return design_extortion(fop.game, 1, reference, std::span(&target, 1));
}

}  // namespace zdkit
