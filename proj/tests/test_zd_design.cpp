#include <random>

#include "doctest.h"
#include "support.hpp"
#include "zdkit/error.hpp"
#include "zdkit/zd_design.hpp"

using zdkit::DenseMatrix;
using zdkit::LinearRelation;
using zdkit::RowSpec;

namespace {

zdkit::ZDAssignment pinning_design() {
  const auto game = fixtures::pinning_game();
  const std::vector<RowSpec> specs{{1, LinearRelation::pinning(3, 1, 4.0), 0.1}, {2, LinearRelation::pinning(3, 3, 3.0), 0.1}};
  return zdkit::design_assignment(game, 2, specs);
}

zdkit::ZDAssignment extortion_design() {
  const auto game = fixtures::extortion_game();
  const std::vector<zdkit::ExtortionTarget> targets{{1, 1, 1.1, 0.05}, {2, 3, 1.2, 0.1}};
  return zdkit::design_extortion(game, 2, 1.0, targets);
}

std::vector<double> expected_payoffs(const zdkit::Game& game, const std::vector<double>& u) {
  std::vector<double> e;
  for (int m = 1; m <= game.players(); ++m) e.push_back(oracle::dot(game.payoff(m), u));
  return e;
}

}  // namespace

TEST_CASE("rows of L - I over Phi_{i,j} sum to p_{i,j} - xi_{i,j}") {
  std::mt19937_64 rng(31);
  for (const auto& counts : std::vector<std::vector<int>>{{2, 2}, {2, 3, 2}, {2, 2, 2}, {3, 3}, {2, 4}}) {
    const zdkit::ProfileIndexer ix(counts);
    const auto kappa = ix.profile_count();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<zdkit::StrategyRule> rules;
      std::vector<DenseMatrix> matrices;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        matrices.push_back(oracle::random_rule(static_cast<std::size_t>(counts[i]), kappa, rng));
        rules.emplace_back(static_cast<int>(i + 1), matrices.back());
      }
      const auto l = oracle::transition(counts, matrices);
      for (int i = 1; i <= ix.players(); ++i)
        for (int j = 1; j <= counts[static_cast<std::size_t>(i - 1)]; ++j) {
          // Independent sum straight from the decoded profiles.
          std::vector<double> sum(kappa, 0.0);
          for (std::size_t t = 1; t <= kappa; ++t) {
            if (oracle::decode(counts, t)[static_cast<std::size_t>(i - 1)] != j) continue;
            for (std::size_t s = 0; s < kappa; ++s) sum[s] += l(t - 1, s) - (t - 1 == s ? 1.0 : 0.0);
          }
          std::vector<double> want(kappa);
          const auto p = rules[static_cast<std::size_t>(i - 1)].row(j);
          for (std::size_t s = 0; s < kappa; ++s)
            want[s] = p[s] - (oracle::decode(counts, s + 1)[static_cast<std::size_t>(i - 1)] == j ? 1.0 : 0.0);
          CHECK(oracle::max_diff(sum, want) < 1e-12);
          CHECK(oracle::max_diff(zdkit::xi_sum_identity(rules, ix, i, j), want) < 1e-12);
        }
    }
  }
}

TEST_CASE("pinning rows for the three-player game") {
  const auto a = pinning_design();
  CHECK(oracle::max_diff(a.rule().row_vector(0), fixtures::kPinningRow1) < 1e-12);
  CHECK(oracle::max_diff(a.rule().row_vector(1), fixtures::kPinningRow2) < 1e-12);
  const auto report = zdkit::rationality_check(a);
  CHECK(report.rational);
  CHECK(report.violations.empty());
  CHECK(report.worst_margin >= 0.0);
  // The remaining row takes whatever mass is left.
  for (std::size_t s = 0; s < 12; ++s) CHECK(a.rule()(2, s) == doctest::Approx(1.0 - fixtures::kPinningRow1[s] - fixtures::kPinningRow2[s]));
}

TEST_CASE("extortion rows for the three-player game") {
  const auto a = extortion_design();
  CHECK(oracle::max_diff(a.rule().row_vector(0), fixtures::kExtortionRow1) < 1e-12);
  CHECK(oracle::max_diff(a.rule().row_vector(1), fixtures::kExtortionRow2) < 1e-12);
  CHECK(zdkit::rationality_check(a).rational);

  // Built on row 3 instead, the same relation gives the reference vector shifted by xi_{2,3} - xi_{2,2}.
  const auto game = fixtures::extortion_game();
  const auto relation = LinearRelation::extortion(3, 2, 3, 1.2, 1.0);
  const auto on_row3 = zdkit::design_row(game, 2, 3, relation, 0.1);
  const auto xi2 = game.indexer().xi(2, 2), xi3 = game.indexer().xi(2, 3);
  for (std::size_t s = 0; s < 12; ++s) CHECK(on_row3[s] == doctest::Approx(fixtures::kExtortionRow2[s] - xi2[s] + xi3[s]).epsilon(1e-12));
}

TEST_CASE("design rejects zero mu, too many rows and duplicates") {
  const auto game = fixtures::pinning_game();
  const auto rel = LinearRelation::pinning(3, 1, 4.0);
  CHECK_THROWS_AS(zdkit::design_row(game, 2, 1, rel, 0.0), zdkit::Error);
  try {
    zdkit::design_row(game, 2, 1, rel, 0.0);
  } catch (const zdkit::Error& e) {
    CHECK(std::string(e.what()).find("nonzero") != std::string::npos);
  }
  const std::vector<RowSpec> three{{1, rel, 0.1}, {2, rel, 0.1}, {3, rel, 0.1}};
  CHECK_THROWS_AS(zdkit::design_assignment(game, 2, three), zdkit::Error);
  const std::vector<RowSpec> dup{{1, rel, 0.1}, {1, rel, 0.05}};
  CHECK_THROWS_AS(zdkit::design_assignment(game, 2, dup), zdkit::Error);
  const std::vector<RowSpec> one_too_many{{1, rel, 0.1}, {2, rel, 0.1}};
  CHECK_THROWS_AS(zdkit::design_assignment(game, 1, one_too_many), zdkit::Error);
  CHECK_THROWS_AS(zdkit::design_row(game, 4, 1, rel, 0.1), zdkit::Error);
  CHECK_THROWS_AS(zdkit::design_row(game, 2, 1, LinearRelation{{1.0, 0.0}, 0.0}, 0.1), zdkit::Error);
  CHECK_THROWS_AS(LinearRelation::extortion(3, 2, 2, 1.1, 1.0), zdkit::Error);
}

TEST_CASE("scaling the relation by c and mu by 1/c leaves the row unchanged") {
  const auto game = fixtures::extortion_game();
  const auto base = LinearRelation::extortion(3, 2, 1, 1.1, 1.0);
  const auto row = zdkit::design_row(game, 2, 1, base, 0.05);
  for (double c : {-3.0, 0.5, 2.0, 10.0}) {
    LinearRelation scaled = base;
    for (auto& a : scaled.coeffs) a *= c;
    scaled.constant *= c;
    CHECK(oracle::max_diff(zdkit::design_row(game, 2, 1, scaled, 0.05 / c), row) < 1e-14);
  }
}

TEST_CASE("feasible mu interval matches its boundary behaviour") {
  const auto game = fixtures::pinning_game();
  const auto rel = LinearRelation::pinning(3, 1, 4.0);
  const auto in = zdkit::feasible_mu_interval(game, 2, 1, rel);
  CHECK(in.lo <= 0.0);
  CHECK(in.hi > 0.0);
  CHECK(in.contains(0.1));
  CHECK_FALSE(in.contains(0.0));
  const auto w = rel.row(game);
  const auto xi = game.indexer().xi(2, 1);
  auto inside = [&](double mu) {
    for (std::size_t s = 0; s < w.size(); ++s) {
      const double p = mu * w[s] + xi[s];
      if (p < -1e-12 || p > 1 + 1e-12) return false;
    }
    return true;
  };
  CHECK(inside(in.lo));
  CHECK(inside(in.hi));
  if (in.lo < 0.0) CHECK_FALSE(inside(in.lo * 1.001));
  CHECK_FALSE(inside(in.hi * 1.001));

  // A constant relation row pushes entries on Phi and off Phi in opposite
  // directions, so no nonzero mu keeps both inside [0, 1].
  const std::vector<double> constant(12, -1.0);
  const zdkit::Game odd({2, 3, 2}, {constant, constant, constant});
  CHECK(zdkit::feasible_mu_interval(odd, 2, 1, LinearRelation{{1, 0, 0}, 0}).empty());
}

TEST_CASE("auto mu produces a rational assignment") {
  const auto game = fixtures::extortion_game();
  const std::vector<RowSpec> specs{{1, LinearRelation::extortion(3, 2, 1, 1.1, 1.0), 0.0},
                                   {2, LinearRelation::extortion(3, 2, 3, 1.2, 1.0), 0.0}};
  const bool is_auto[] = {true, true};
  const auto mus = zdkit::choose_auto_mu(game, 2, specs, is_auto);
  REQUIRE(mus.has_value());
  auto chosen = specs;
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK((*mus)[r] != 0.0);
    CHECK(zdkit::feasible_mu_interval(game, 2, specs[r].strategy, specs[r].relation).contains((*mus)[r]));
    chosen[r].mu = (*mus)[r];
  }
  CHECK(zdkit::rationality_check(zdkit::design_assignment(game, 2, chosen)).rational);
}

TEST_CASE("rationality reports out-of-range entries and the row-sum constraint") {
  const auto game = fixtures::pinning_game();
  const std::vector<RowSpec> big{{1, LinearRelation::pinning(3, 1, 4.0), 1.0}};
  const auto report = zdkit::rationality_check(zdkit::design_assignment(game, 2, big));
  CHECK_FALSE(report.rational);
  CHECK(report.worst_margin < 0.0);
  REQUIRE_FALSE(report.violations.empty());
  for (const auto& v : report.violations) CHECK((v.value < 0.0 || v.value > 1.0));

  // Each row alone in range, but together above one.
  std::vector<double> flat(12, 0.0);
  const zdkit::Game g({2, 3, 2}, {flat, flat, flat});
  std::map<int, std::vector<double>> fixed{{1, std::vector<double>(12, 0.7)}, {2, std::vector<double>(12, 0.6)}};
  const auto a = zdkit::design_assignment(g, 2, {}, fixed);
  const auto sum_report = zdkit::rationality_check(a);
  CHECK_FALSE(sum_report.rational);
  bool saw_sum = false;
  for (const auto& v : sum_report.violations) saw_sum = saw_sum || v.strategy == 0;
  CHECK(saw_sum);
}

TEST_CASE("designed relations hold against random interior opponents") {
  std::mt19937_64 rng(32);
  for (const auto& [game, a] : {std::pair{fixtures::pinning_game(), pinning_design()},
                                std::pair{fixtures::extortion_game(), extortion_design()}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto opponents = zdkit::random_opponents(game, 2, rng);
      const auto report = zdkit::verify_effectiveness(game, a, opponents);
      CHECK(report.effective);
      CHECK(report.primitive);
      // Independent check: stationary vector by plain iteration of the oracle transition.
      std::vector<DenseMatrix> matrices{opponents[0].matrix(), a.rule(), opponents[1].matrix()};
      const auto u = oracle::iterate_stationary(oracle::transition({2, 3, 2}, matrices));
      const auto e = expected_payoffs(game, u);
      for (const auto& d : a.designed()) CHECK(std::abs(d.relation.evaluate(e)) < 1e-9);
      CHECK(oracle::max_diff(report.expected_payoffs, e) < 1e-9);
    }
  }
}

TEST_CASE("pinned payoffs take their target values") {
  std::mt19937_64 rng(33);
  const auto game = fixtures::pinning_game();
  const auto a = pinning_design();
  const auto report = zdkit::verify_effectiveness(game, a, zdkit::random_opponents(game, 2, rng));
  REQUIRE(report.effective);
  CHECK(report.expected_payoffs[0] == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(report.expected_payoffs[2] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("ineffective designs are reported, not thrown") {
  const auto game = fixtures::extortion_game();
  const auto a = extortion_design();
  std::mt19937_64 rng(34);
  const auto player3 = zdkit::random_interior_rule(3, 2, 12, rng);
  const zdkit::ProfileIndexer& ix = game.indexer();
  DenseMatrix flip(2, 12), stay(2, 12);
  for (std::size_t s = 1; s <= 12; ++s) {
    const int own = ix.decode(s)[0];
    flip(static_cast<std::size_t>(2 - own), s - 1) = 1.0;
    stay(static_cast<std::size_t>(own - 1), s - 1) = 1.0;
  }
  const std::vector<zdkit::StrategyRule> flipping{zdkit::StrategyRule(1, flip), player3};
  const auto periodic = zdkit::verify_effectiveness(game, a, flipping);
  CHECK_FALSE(periodic.effective);
  CHECK_FALSE(periodic.conditions.limit);
  CHECK(periodic.conditions.rank);
  CHECK(periodic.failure == "ineffective: limit condition failed");

  const std::vector<zdkit::StrategyRule> stubborn{zdkit::StrategyRule(1, stay), player3};
  const auto split = zdkit::verify_effectiveness(game, a, stubborn);
  CHECK_FALSE(split.effective);
  CHECK_FALSE(split.conditions.rank);
  CHECK(split.failure.find("rank condition failed") != std::string::npos);
}

TEST_CASE("warnings flag a designer pinning its own payoff") {
  const auto game = fixtures::pinning_game();
  const std::vector<RowSpec> self{{1, LinearRelation::pinning(3, 2, 2.0), 0.05}};
  const auto warnings = zdkit::design_warnings(zdkit::design_assignment(game, 2, self));
  CHECK(warnings.size() == 1);
  CHECK(zdkit::design_warnings(pinning_design()).empty());
}

TEST_CASE("assignment rejects inconsistent bookkeeping") {
  const auto a = pinning_design();
  auto rule = a.rule();
  rule(0, 0) += 0.01;
  CHECK_THROWS_AS(zdkit::ZDAssignment(2, a.designed(), {}, rule), zdkit::Error);
  CHECK_THROWS_AS(zdkit::ZDAssignment(2, a.designed(), {1}, a.rule()), zdkit::Error);
}
