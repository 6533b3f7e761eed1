#pragma once

// Zero-determinant strategy design.
//
// A designer i picks, for some of its strategies j, a linear relation
//   a_1 Ec_1 + ... + a_n Ec_n + a_0 = 0
// among the players' stationary expected payoffs, and sets
//   p_{i,j} = mu_{i,j} * (a_1 V_1 + ... + a_n V_n + a_0 1) + xi_{i,j}.
// Because the rows of L - I over Phi_{i,j} sum to p_{i,j} - xi_{i,j}, and
// every row of L - I annihilates the stationary vector, the relation holds
// whenever L has a unique limit distribution. At most k_i - 1 rows can be
// designed; the remaining probability mass goes to the undesigned rows.

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "zdkit/evolution.hpp"
#include "zdkit/game.hpp"

namespace zdkit {

// Homogeneous form sum_m coeffs[m-1] * Ec_m + constant = 0.
struct LinearRelation {
  std::vector<double> coeffs;
  double constant = 0.0;

  // Ec_m = value
  static LinearRelation pinning(int players, int target, double value);
  // Ec_self - reference = factor * (Ec_target - reference)
  static LinearRelation extortion(int players, int self, int target, double factor, double reference);

  bool is_zero() const noexcept;
  // sum_m a_m V_m + a_0 1, one entry per profile.
  std::vector<double> row(const Game& game) const;
  double evaluate(std::span<const double> expected_payoffs) const;
  // |l(Ec)| / (sum_m |a_m Ec_m| + |a_0|); 0 when the denominator vanishes.
  double relative_residual(std::span<const double> expected_payoffs) const;

  bool operator==(const LinearRelation&) const = default;
};

// Sum of the rows of L - I indexed by Phi_{i,j}. Throws internal error if it
// differs from p_{i,j} - xi_{i,j} by more than tol.
std::vector<double> xi_sum_identity(std::span<const StrategyRule> rules, const ProfileIndexer& indexer, int player,
                                    int strategy, double tol = 1e-10);

// p = mu * relation.row(game) + xi_{i,j}. Throws domain error for mu == 0.
std::vector<double> design_row(const Game& game, int player, int strategy, const LinearRelation& relation, double mu);

struct DesignedRow {
  int strategy = 0;
  LinearRelation relation;
  double mu = 0.0;
  std::vector<double> probabilities;

  bool operator==(const DesignedRow&) const = default;
};

struct RowSpec {
  int strategy = 0;
  LinearRelation relation;
  double mu = 0.0;
};

class ZDAssignment {
 public:
  // Validates row bookkeeping and that the full rule is k_i x kappa. Does not check rationality.
  ZDAssignment(int designer, std::vector<DesignedRow> designed, std::vector<int> fixed_rows, DenseMatrix rule);

  int designer() const noexcept { return designer_; }
  const std::vector<DesignedRow>& designed() const noexcept { return designed_; }
  // Undesigned rows whose values were supplied by the caller.
  const std::vector<int>& fixed_rows() const noexcept { return fixed_; }
  // Complete k_i x kappa rule; may hold out-of-range values when not rational.
  const DenseMatrix& rule() const noexcept { return rule_; }
  std::size_t strategy_count() const noexcept { return rule_.rows(); }
  std::size_t profile_count() const noexcept { return rule_.cols(); }

  // Throws validation error if the rule is not a proper stochastic rule.
  StrategyRule as_strategy_rule(double tol = 1e-9) const;

  bool operator==(const ZDAssignment&) const = default;

 private:
  int designer_;
  std::vector<DesignedRow> designed_;
  std::vector<int> fixed_;
  DenseMatrix rule_;
};

// Designs every row in specs and fills the rest: caller-supplied rows in
// fixed_rows are kept, and the remaining mass 1 - sum(designed + fixed) is
// split evenly across the other undesigned rows.
ZDAssignment design_assignment(const Game& game, int designer, std::span<const RowSpec> specs,
                               const std::map<int, std::vector<double>>& fixed_rows = {});

DesignedRow design_pinning(const Game& game, int designer, int strategy, int target, double value, double mu);

struct ExtortionTarget {
  int strategy = 0;  // designed row
  int target = 0;    // opponent m
  double factor = 1.0;
  double mu = 0.0;
};

ZDAssignment design_extortion(const Game& game, int designer, double reference, std::span<const ExtortionTarget> targets);

struct RationalityViolation {
  int strategy = 0;  // 0 for the row-sum constraint
  std::size_t profile = 0;
  double value = 0.0;
};

struct RationalityReport {
  bool rational = false;
  // Smallest distance from an inequality boundary; negative when violated.
  double worst_margin = 0.0;
  std::vector<RationalityViolation> violations;
};

// Human-readable notes about legal but unusual designs (e.g. self-pinning).
std::vector<std::string> design_warnings(const ZDAssignment& assignment);

RationalityReport rationality_check(const ZDAssignment& assignment, double tol = 1e-12);

// Closed interval [lo, hi] (always containing 0) of mu values keeping the
// designed row inside [0,1]; the admissible set excludes mu = 0.
struct MuInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const noexcept { return lo == 0.0 && hi == 0.0; }
  bool contains(double mu) const noexcept { return mu != 0.0 && mu >= lo && mu <= hi; }
};

MuInterval feasible_mu_interval(const Game& game, int designer, int strategy, const LinearRelation& relation);

// Picks mu for rows marked auto: half of the wider side of each row's
// interval, shrinking jointly until the row-sum constraint holds.
// Returns nullopt when no admissible combination is found.
std::optional<std::vector<double>> choose_auto_mu(const Game& game, int designer, std::span<const RowSpec> specs,
                                                  std::span<const bool> is_auto,
                                                  const std::map<int, std::vector<double>>& fixed_rows = {});

struct EffectivenessReport {
  bool rational = false;
  bool primitive = false;
  EffectivenessConditions conditions;
  bool effective = false;
  std::vector<double> stationary;
  std::vector<double> expected_payoffs;
  std::vector<double> residuals;  // |l(Ec)| per designed relation
  std::string failure;           // which condition failed, if any
};

inline constexpr double kResidualTolerance = 1e-8;

// Builds the full transition matrix from the designer's rule and the
// opponents' rules, checks both limit conditions and evaluates the relations.
EffectivenessReport verify_effectiveness(const Game& game, const ZDAssignment& assignment,
                                         std::span<const StrategyRule> opponents, double tol = kResidualTolerance);

// Rules for every player except the designer, in player order.
std::vector<StrategyRule> random_opponents(const Game& game, int designer, std::mt19937_64& rng);

// Every player's rule in player order; the designer's comes from the assignment.
std::vector<StrategyRule> assemble_rules(const Game& game, const ZDAssignment& assignment,
                                         std::span<const StrategyRule> opponents);

}  // namespace zdkit
