#include "zdkit/zd_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "zdkit/error.hpp"

namespace zdkit {

namespace {

void check_designer(const Game& game, int designer) {
  if (designer < 1 || designer > game.players()) {
    fail(ErrorKind::domain, "designer " + std::to_string(designer) + " outside 1.." + std::to_string(game.players()));
  }
}

void check_relation(const Game& game, const LinearRelation& relation) {
  if (static_cast<int>(relation.coeffs.size()) != game.players()) {
    fail(ErrorKind::dimension, "relation has " + std::to_string(relation.coeffs.size()) + " payoff coefficients, game has " +
                                   std::to_string(game.players()) + " players");
  }
  if (relation.is_zero()) fail(ErrorKind::domain, "relation coefficients are all zero");
  for (double a : relation.coeffs)
    if (!std::isfinite(a)) fail(ErrorKind::domain, "relation coefficient is not finite");
  if (!std::isfinite(relation.constant)) fail(ErrorKind::domain, "relation constant is not finite");
}

std::string cap_message(int designer, int k) {
  return "player " + std::to_string(designer) + " has " + std::to_string(k) + " strategies and can design at most " +
         std::to_string(k - 1) + " relations (the last row is fixed by the others)";
}

}  // namespace

LinearRelation LinearRelation::pinning(int players, int target, double value) {
  if (target < 1 || target > players) fail(ErrorKind::domain, "pinning target " + std::to_string(target) + " out of range");
  LinearRelation r{std::vector<double>(static_cast<std::size_t>(players), 0.0), -value};
  r.coeffs[static_cast<std::size_t>(target - 1)] = 1.0;
  return r;
}

LinearRelation LinearRelation::extortion(int players, int self, int target, double factor, double reference) {
  if (self < 1 || self > players || target < 1 || target > players) fail(ErrorKind::domain, "extortion player out of range");
  if (self == target) fail(ErrorKind::domain, "extortion needs a target different from the designer");
  LinearRelation r{std::vector<double>(static_cast<std::size_t>(players), 0.0), -reference * (1.0 - factor)};
  r.coeffs[static_cast<std::size_t>(self - 1)] = 1.0;
  r.coeffs[static_cast<std::size_t>(target - 1)] = -factor;
  return r;
}

bool LinearRelation::is_zero() const noexcept {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double a) { return a == 0.0; }) && constant == 0.0;
}

std::vector<double> LinearRelation::row(const Game& game) const {
  check_relation(game, *this);
  std::vector<double> out(game.profile_count(), constant);
  for (int m = 1; m <= game.players(); ++m) {
    const double a = coeffs[static_cast<std::size_t>(m - 1)];
    if (a == 0.0) continue;
    const auto& v = game.payoff(m);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += a * v[s];
  }
  return out;
}

double LinearRelation::evaluate(std::span<const double> expected_payoffs) const {
  if (expected_payoffs.size() != coeffs.size()) fail(ErrorKind::dimension, "payoff count does not match relation");
  double value = constant;
  for (std::size_t m = 0; m < coeffs.size(); ++m) value += coeffs[m] * expected_payoffs[m];
  return value;
}

double LinearRelation::relative_residual(std::span<const double> expected_payoffs) const {
  const double value = evaluate(expected_payoffs);
  double scale = std::abs(constant);
  for (std::size_t m = 0; m < coeffs.size(); ++m) scale += std::abs(coeffs[m] * expected_payoffs[m]);
  return scale == 0.0 ? 0.0 : std::abs(value) / scale;
}

std::vector<double> xi_sum_identity(std::span<const StrategyRule> rules, const ProfileIndexer& indexer, int player,
                                    int strategy, double tol) {
  const auto phi = indexer.phi(player, strategy);
  const auto it = std::find_if(rules.begin(), rules.end(), [&](const StrategyRule& r) { return r.player() == player; });
  if (it == rules.end()) fail(ErrorKind::domain, "no rule for player " + std::to_string(player));

  const auto l = build_pee(rules);
  const std::size_t kappa = indexer.profile_count();
  if (l.size() != kappa) fail(ErrorKind::dimension, "rules do not match the profile indexer");
  const DenseMatrix& m = l.matrix();
  std::vector<double> sum(kappa, 0.0);
  for (std::size_t s : phi) {
    for (std::size_t c = 0; c < kappa; ++c) sum[c] += m(s - 1, c);
    sum[s - 1] -= 1.0;
  }

  const auto p = it->row(strategy);
  const auto xi = indexer.xi(player, strategy);
  for (std::size_t c = 0; c < kappa; ++c) {
    const double expected = p[c] - xi[c];
    if (std::abs(sum[c] - expected) > tol) {
      fail(ErrorKind::internal, "row-sum identity broken for (" + std::to_string(player) + "," + std::to_string(strategy) +
                                    ") at profile " + std::to_string(c + 1) + ": " + std::to_string(sum[c]) + " vs " +
                                    std::to_string(expected));
    }
  }
  return sum;
}

std::vector<double> design_row(const Game& game, int player, int strategy, const LinearRelation& relation, double mu) {
  check_designer(game, player);
  if (mu == 0.0 || !std::isfinite(mu)) fail(ErrorKind::domain, "mu must be a finite nonzero number (mu_{i,j} != 0)");
  auto row = relation.row(game);
  const auto xi = game.indexer().xi(player, strategy);
  for (std::size_t s = 0; s < row.size(); ++s) row[s] = mu * row[s] + xi[s];
  return row;
}

ZDAssignment::ZDAssignment(int designer, std::vector<DesignedRow> designed, std::vector<int> fixed_rows, DenseMatrix rule)
    : designer_(designer), designed_(std::move(designed)), fixed_(std::move(fixed_rows)), rule_(std::move(rule)) {
  const auto k = static_cast<int>(rule_.rows());
  if (k < 2) fail(ErrorKind::dimension, "assignment rule needs at least 2 rows");
  if (static_cast<int>(designed_.size()) > k - 1) fail(ErrorKind::domain, cap_message(designer_, k));
  std::set<int> used;
  for (const auto& d : designed_) {
    if (d.strategy < 1 || d.strategy > k) fail(ErrorKind::domain, "designed row " + std::to_string(d.strategy) + " out of range");
    if (!used.insert(d.strategy).second) fail(ErrorKind::domain, "row " + std::to_string(d.strategy) + " designed twice");
    if (d.probabilities.size() != rule_.cols()) fail(ErrorKind::dimension, "designed row length does not match profile count");
    for (std::size_t s = 0; s < rule_.cols(); ++s) {
      if (d.probabilities[s] != rule_(static_cast<std::size_t>(d.strategy - 1), s)) {
        fail(ErrorKind::validation, "rule row " + std::to_string(d.strategy) + " differs from its designed probabilities");
      }
    }
  }
  for (int f : fixed_) {
    if (f < 1 || f > k) fail(ErrorKind::domain, "fixed row " + std::to_string(f) + " out of range");
    if (!used.insert(f).second) fail(ErrorKind::domain, "row " + std::to_string(f) + " is both designed and fixed");
  }
}

StrategyRule ZDAssignment::as_strategy_rule(double tol) const { return StrategyRule(designer_, rule_, tol); }

ZDAssignment design_assignment(const Game& game, int designer, std::span<const RowSpec> specs,
                               const std::map<int, std::vector<double>>& fixed_rows) {
  check_designer(game, designer);
  const int k = game.strategy_count(designer);
  const std::size_t kappa = game.profile_count();
  if (static_cast<int>(specs.size()) > k - 1) fail(ErrorKind::domain, cap_message(designer, k));

  DenseMatrix rule(static_cast<std::size_t>(k), kappa);
  std::vector<char> taken(static_cast<std::size_t>(k) + 1, 0);
  std::vector<double> mass(kappa, 0.0);
  std::vector<DesignedRow> designed;
  for (const auto& spec : specs) {
    if (spec.strategy < 1 || spec.strategy > k) {
      fail(ErrorKind::domain, "designed row " + std::to_string(spec.strategy) + " outside 1.." + std::to_string(k));
    }
    if (taken[static_cast<std::size_t>(spec.strategy)]) fail(ErrorKind::domain, "row " + std::to_string(spec.strategy) + " designed twice");
    taken[static_cast<std::size_t>(spec.strategy)] = 1;
    auto p = design_row(game, designer, spec.strategy, spec.relation, spec.mu);
    for (std::size_t s = 0; s < kappa; ++s) {
      rule(static_cast<std::size_t>(spec.strategy - 1), s) = p[s];
      mass[s] += p[s];
    }
    designed.push_back({spec.strategy, spec.relation, spec.mu, std::move(p)});
  }

  std::vector<int> fixed;
  for (const auto& [row, values] : fixed_rows) {
    if (row < 1 || row > k) fail(ErrorKind::domain, "fixed row " + std::to_string(row) + " outside 1.." + std::to_string(k));
    if (taken[static_cast<std::size_t>(row)]) fail(ErrorKind::domain, "row " + std::to_string(row) + " is both designed and fixed");
    if (values.size() != kappa) fail(ErrorKind::dimension, "fixed row " + std::to_string(row) + " needs " + std::to_string(kappa) + " entries");
    taken[static_cast<std::size_t>(row)] = 1;
    for (std::size_t s = 0; s < kappa; ++s) {
      rule(static_cast<std::size_t>(row - 1), s) = values[s];
      mass[s] += values[s];
    }
    fixed.push_back(row);
  }

  std::vector<int> free_rows;
  for (int j = 1; j <= k; ++j)
    if (!taken[static_cast<std::size_t>(j)]) free_rows.push_back(j);
  for (int j : free_rows)
    for (std::size_t s = 0; s < kappa; ++s)
      rule(static_cast<std::size_t>(j - 1), s) = (1.0 - mass[s]) / static_cast<double>(free_rows.size());

  return ZDAssignment(designer, std::move(designed), std::move(fixed), std::move(rule));
}

DesignedRow design_pinning(const Game& game, int designer, int strategy, int target, double value, double mu) {
  auto relation = LinearRelation::pinning(game.players(), target, value);
  auto p = design_row(game, designer, strategy, relation, mu);
  return {strategy, std::move(relation), mu, std::move(p)};
}

ZDAssignment design_extortion(const Game& game, int designer, double reference, std::span<const ExtortionTarget> targets) {
  check_designer(game, designer);
  const int k = game.strategy_count(designer);
  if (static_cast<int>(targets.size()) > k - 1) fail(ErrorKind::domain, cap_message(designer, k));
  std::vector<RowSpec> specs;
  for (const auto& t : targets) {
    specs.push_back({t.strategy, LinearRelation::extortion(game.players(), designer, t.target, t.factor, reference), t.mu});
  }
  return design_assignment(game, designer, specs);
}

RationalityReport rationality_check(const ZDAssignment& assignment, double tol) {
  RationalityReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const DenseMatrix& rule = assignment.rule();
  const std::size_t kappa = rule.cols();

  std::vector<int> rows;
  for (const auto& d : assignment.designed()) rows.push_back(d.strategy);
  for (int f : assignment.fixed_rows()) rows.push_back(f);
  std::sort(rows.begin(), rows.end());

  auto visit = [&](int strategy, std::size_t s, double v) {
    const double margin = std::min(v, 1.0 - v);
    report.worst_margin = std::min(report.worst_margin, margin);
    if (margin < -tol) report.violations.push_back({strategy, s + 1, v});
  };

  std::vector<double> sum(kappa, 0.0);
  for (int j : rows) {
    for (std::size_t s = 0; s < kappa; ++s) {
      const double v = rule(static_cast<std::size_t>(j - 1), s);
      visit(j, s, v);
      sum[s] += v;
    }
  }
  if (!rows.empty())
    for (std::size_t s = 0; s < kappa; ++s) visit(0, s, sum[s]);

  if (rows.empty()) report.worst_margin = 0.0;
  report.rational = report.violations.empty();
  return report;
}

MuInterval feasible_mu_interval(const Game& game, int designer, int strategy, const LinearRelation& relation) {
  check_designer(game, designer);
  const auto w = relation.row(game);
  const auto xi = game.indexer().xi(designer, strategy);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] > 0.0) {
      lo = std::max(lo, -xi[s] / w[s]);
      hi = std::min(hi, (1.0 - xi[s]) / w[s]);
    } else if (w[s] < 0.0) {
      lo = std::max(lo, (1.0 - xi[s]) / w[s]);
      hi = std::min(hi, -xi[s] / w[s]);
    }
  }
  // -0.0 bounds compare equal to zero; normalize so empty() is exact.
  return {lo == 0.0 ? 0.0 : lo, hi == 0.0 ? 0.0 : hi};
}

std::optional<std::vector<double>> choose_auto_mu(const Game& game, int designer, std::span<const RowSpec> specs,
                                                  std::span<const bool> is_auto,
                                                  const std::map<int, std::vector<double>>& fixed_rows) {
  if (is_auto.size() != specs.size()) fail(ErrorKind::dimension, "auto flags do not match relation count");
  static constexpr double kShrink[] = {0.5, 0.25, 0.125, 0.0625, 0.03125};

  std::vector<std::vector<double>> candidates(specs.size());
  for (std::size_t r = 0; r < specs.size(); ++r) {
    if (!is_auto[r]) {
      candidates[r] = {specs[r].mu};
      continue;
    }
    const auto interval = feasible_mu_interval(game, designer, specs[r].strategy, specs[r].relation);
    if (interval.empty()) return std::nullopt;
    std::vector<double> sides;
    // Wider side first; an unbounded side means the relation row vanishes.
    const double neg = std::isinf(interval.lo) ? -1.0 : interval.lo;
    const double pos = std::isinf(interval.hi) ? 1.0 : interval.hi;
    if (pos >= -neg) {
      if (pos > 0.0) sides.push_back(pos);
      if (neg < 0.0) sides.push_back(neg);
    } else {
      sides.push_back(neg);
      if (pos > 0.0) sides.push_back(pos);
    }
    for (double f : kShrink)
      for (double side : sides) candidates[r].push_back(f * side);
  }

  std::vector<RowSpec> trial(specs.begin(), specs.end());
  std::vector<std::size_t> pick(specs.size(), 0);
  for (std::size_t budget = 0; budget < 100000; ++budget) {
    for (std::size_t r = 0; r < specs.size(); ++r) trial[r].mu = candidates[r][pick[r]];
    if (rationality_check(design_assignment(game, designer, trial, fixed_rows)).rational) {
      std::vector<double> mus;
      for (const auto& t : trial) mus.push_back(t.mu);
      return mus;
    }
    std::size_t r = 0;
    for (; r < specs.size(); ++r) {
      if (++pick[r] < candidates[r].size()) break;
      pick[r] = 0;
    }
    if (r == specs.size()) break;
  }
  return std::nullopt;
}

std::vector<StrategyRule> random_opponents(const Game& game, int designer, std::mt19937_64& rng) {
  check_designer(game, designer);
  std::vector<StrategyRule> out;
  for (int m = 1; m <= game.players(); ++m) {
    if (m == designer) continue;
    out.push_back(random_interior_rule(m, static_cast<std::size_t>(game.strategy_count(m)), game.profile_count(), rng));
  }
  return out;
}

std::vector<StrategyRule> assemble_rules(const Game& game, const ZDAssignment& assignment,
                                         std::span<const StrategyRule> opponents) {
  std::vector<StrategyRule> rules;
  for (int m = 1; m <= game.players(); ++m) {
    if (m == assignment.designer()) {
      rules.push_back(assignment.as_strategy_rule());
      continue;
    }
    const auto hits = std::count_if(opponents.begin(), opponents.end(), [&](const StrategyRule& r) { return r.player() == m; });
    if (hits != 1) fail(ErrorKind::domain, "expected exactly one rule for player " + std::to_string(m) + ", got " + std::to_string(hits));
    const auto& rule = *std::find_if(opponents.begin(), opponents.end(), [&](const StrategyRule& r) { return r.player() == m; });
    if (static_cast<int>(rule.strategy_count()) != game.strategy_count(m) || rule.profile_count() != game.profile_count()) {
      fail(ErrorKind::dimension, "rule of player " + std::to_string(m) + " has the wrong shape");
    }
    rules.push_back(rule);
  }
  return rules;
}

EffectivenessReport verify_effectiveness(const Game& game, const ZDAssignment& assignment,
                                         std::span<const StrategyRule> opponents, double tol) {
  EffectivenessReport report;
  report.rational = rationality_check(assignment).rational;
  if (assignment.profile_count() != game.profile_count() ||
      static_cast<int>(assignment.strategy_count()) != game.strategy_count(assignment.designer())) {
    fail(ErrorKind::dimension, "assignment does not match the game");
  }

  std::vector<StrategyRule> rules;
  try {
    rules = assemble_rules(game, assignment, opponents);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::validation) throw;
    report.failure = "designer rule is not a probability rule: " + std::string(e.what());
    return report;
  }
  const auto l = build_pee(rules);
  report.primitive = is_primitive(l.matrix()).primitive;
  report.conditions = effectiveness_conditions(l.matrix());
  if (!report.conditions.both()) {
    std::string why;
    if (!report.conditions.limit) why = "limit condition failed";
    if (!report.conditions.rank) why += std::string(why.empty() ? "" : "; ") + "rank condition failed";
    report.failure = "ineffective: " + why;
    return report;
  }

  report.stationary = stationary_nullspace(l.matrix());
  for (int m = 1; m <= game.players(); ++m) {
    const auto& v = game.payoff(m);
    double e = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) e += v[s] * report.stationary[s];
    report.expected_payoffs.push_back(e);
  }
  report.effective = true;
  for (const auto& d : assignment.designed()) {
    const double r = std::abs(d.relation.evaluate(report.expected_payoffs));
    report.residuals.push_back(r);
    if (!(r < tol)) report.effective = false;
  }
  if (!report.effective) report.failure = "relation residual exceeds tolerance";
  return report;
}

std::vector<std::string> design_warnings(const ZDAssignment& assignment) {
  std::vector<std::string> out;
  for (const auto& d : assignment.designed()) {
    const auto& a = d.relation.coeffs;
    const auto self = static_cast<std::size_t>(assignment.designer() - 1);
    bool only_self = self < a.size() && a[self] != 0.0;
    for (std::size_t m = 0; m < a.size() && only_self; ++m)
      if (m != self && a[m] != 0.0) only_self = false;
    if (only_self) {
      out.push_back("row " + std::to_string(d.strategy) + " pins the designer's own payoff");
    }
  }
  return out;
}

}  // namespace zdkit
