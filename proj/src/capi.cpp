#include "zdkit/zdkit.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "zdkit/error.hpp"
#include "zdkit/evolution.hpp"
#include "zdkit/game.hpp"
#include "zdkit/neg.hpp"
#include "zdkit/serialization.hpp"
#include "zdkit/simulation.hpp"
#include "zdkit/stp.hpp"
#include "zdkit/zd_design.hpp"

struct zd_matrix {
  zdkit::DenseMatrix value;
};
struct zd_game {
  zdkit::Game value;
};
struct zd_assignment {
  zdkit::ZDAssignment value;
};
struct zd_rules {
  std::vector<zdkit::StrategyRule> value;
};
struct zd_network {
  zdkit::NetworkGame value;
};

namespace {

thread_local std::string last_error;

struct BadArgument {
  std::string what;
};

zd_status status_of(zdkit::ErrorKind kind) {
  using zdkit::ErrorKind;
  switch (kind) {
    case ErrorKind::domain: return ZD_DOMAIN;
    case ErrorKind::dimension: return ZD_DIMENSION;
    case ErrorKind::validation: return ZD_VALIDATION;
    case ErrorKind::analysis: return ZD_ANALYSIS;
    case ErrorKind::numeric: return ZD_NUMERIC;
    case ErrorKind::capacity: return ZD_CAPACITY;
    case ErrorKind::parse: return ZD_PARSE;
    case ErrorKind::io: return ZD_IO;
    case ErrorKind::internal: return ZD_INTERNAL;
  }
  return ZD_INTERNAL;
}

template <typename F>
zd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ZD_OK;
  } catch (const BadArgument& e) {
    last_error = e.what;
    return ZD_INVALID_ARGUMENT;
  } catch (const zdkit::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return ZD_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ZD_CAPACITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ZD_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return ZD_INTERNAL;
  }
}

template <typename T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw BadArgument{std::string(name) + " is null"};
}

void require_capacity(std::size_t need, std::size_t capacity) {
  if (capacity < need) {
    throw BadArgument{"buffer holds " + std::to_string(capacity) + " values, need " + std::to_string(need)};
  }
}

void write_values(std::span<const double> values, double* out, std::size_t capacity) {
  require(out, "out");
  require_capacity(values.size(), capacity);
  std::copy(values.begin(), values.end(), out);
}

char* duplicate(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void emit(char** out, const zdkit::Json& j) {
  if (out != nullptr) *out = duplicate(j.dump());
}

zdkit::RowSpec row_spec(const zdkit::Game& game, const zd_relation& r) {
  if (r.coeff_count != static_cast<std::size_t>(game.players())) {
    zdkit::fail(zdkit::ErrorKind::dimension, "relation needs " + std::to_string(game.players()) + " coefficients, got " +
                                                 std::to_string(r.coeff_count));
  }
  require(r.coeffs, "relation.coeffs");
  zdkit::RowSpec spec;
  spec.strategy = r.strategy;
  spec.relation.coeffs.assign(r.coeffs, r.coeffs + r.coeff_count);
  spec.relation.constant = r.constant;
  spec.mu = r.mu;
  return spec;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Resolves auto mu values, reporting which row made it impossible.
zdkit::ZDAssignment design_with_auto(const zdkit::Game& game, int designer, std::vector<zdkit::RowSpec> specs,
                                     const std::vector<bool>& is_auto) {
  bool any_auto = false;
  for (bool a : is_auto) any_auto = any_auto || a;
  if (any_auto) {
    for (std::size_t r = 0; r < specs.size(); ++r) {
      if (!is_auto[r]) continue;
      const auto interval = zdkit::feasible_mu_interval(game, designer, specs[r].strategy, specs[r].relation);
      if (interval.empty()) {
        zdkit::fail(zdkit::ErrorKind::analysis, "cannot choose mu for row " + std::to_string(specs[r].strategy) +
                                                    ": the feasible interval is empty ([0, 0]); no nonzero mu keeps "
                                                    "the row inside [0, 1]");
      }
    }
    const std::unique_ptr<bool[]> auto_flags(new bool[is_auto.size()]);
    for (std::size_t r = 0; r < is_auto.size(); ++r) auto_flags[r] = is_auto[r];
    const auto mus = zdkit::choose_auto_mu(game, designer, specs, std::span<const bool>(auto_flags.get(), is_auto.size()));
    if (!mus) {
      std::string detail;
      for (std::size_t r = 0; r < specs.size(); ++r) {
        if (!is_auto[r]) continue;
        const auto in = zdkit::feasible_mu_interval(game, designer, specs[r].strategy, specs[r].relation);
        detail += " row " + std::to_string(specs[r].strategy) + " [" + format_bound(in.lo) + ", " + format_bound(in.hi) + "]";
      }
      zdkit::fail(zdkit::ErrorKind::analysis,
                  "cannot choose mu: no combination inside the feasible intervals keeps the designed rows' sum in [0, 1];" +
                      detail);
    }
    for (std::size_t r = 0; r < specs.size(); ++r) specs[r].mu = (*mus)[r];
  }
  return zdkit::design_assignment(game, designer, specs);
}

zdkit::Json rationality_json(const zdkit::ZDAssignment& a, const zdkit::RationalityReport& report) {
  auto j = zdkit::rationality_to_json(report);
  j["designer"] = a.designer();
  zdkit::Json mus = zdkit::Json::array();
  for (const auto& d : a.designed()) mus.push_back({{"row", d.strategy}, {"mu", d.mu}});
  j["mu"] = mus;
  j["warnings"] = zdkit::design_warnings(a);
  return j;
}

zdkit::DenseMatrix transition(const zdkit::Game& g, const zdkit::ZDAssignment& a,
                              std::span<const zdkit::StrategyRule> opponents) {
  const auto rules = zdkit::assemble_rules(g, a, opponents);
  return zdkit::build_pee(rules).matrix();
}

}  // namespace

extern "C" {

const char* zd_last_error(void) { return last_error.c_str(); }

const char* zd_status_name(zd_status status) {
  switch (status) {
    case ZD_OK: return "ok";
    case ZD_INVALID_ARGUMENT: return "invalid argument";
    case ZD_DOMAIN: return "domain error";
    case ZD_DIMENSION: return "dimension error";
    case ZD_VALIDATION: return "validation error";
    case ZD_ANALYSIS: return "analysis error";
    case ZD_NUMERIC: return "numeric error";
    case ZD_CAPACITY: return "capacity error";
    case ZD_PARSE: return "parse error";
    case ZD_IO: return "io error";
    case ZD_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* zd_version(void) { return ZDKIT_VERSION; }

void zd_string_free(char* s) { std::free(s); }

zd_status zd_matrix_create(size_t rows, size_t cols, const double* entries, zd_matrix** out) {
  return guarded([&] {
    require(entries, "entries");
    require(out, "out");
    std::vector<double> values(entries, entries + rows * cols);
    *out = new zd_matrix{zdkit::DenseMatrix(rows, cols, std::move(values))};
  });
}

zd_status zd_matrix_identity(size_t n, zd_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = new zd_matrix{zdkit::DenseMatrix::identity(n)};
  });
}

void zd_matrix_destroy(zd_matrix* m) { delete m; }

zd_status zd_matrix_shape(const zd_matrix* m, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(m, "matrix");
    if (rows) *rows = m->value.rows();
    if (cols) *cols = m->value.cols();
  });
}

zd_status zd_matrix_copy(const zd_matrix* m, double* out, size_t capacity) {
  return guarded([&] {
    require(m, "matrix");
    write_values(m->value.entries(), out, capacity);
  });
}

zd_status zd_stp(const zd_matrix* a, const zd_matrix* b, zd_matrix** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = new zd_matrix{zdkit::stp(a->value, b->value)};
  });
}

zd_status zd_kron(const zd_matrix* a, const zd_matrix* b, zd_matrix** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = new zd_matrix{zdkit::kron(a->value, b->value)};
  });
}

zd_status zd_khatri_rao(const zd_matrix* a, const zd_matrix* b, zd_matrix** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = new zd_matrix{zdkit::khatri_rao(a->value, b->value)};
  });
}

zd_status zd_matrix_load(const char* path, zd_matrix** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new zd_matrix{zdkit::matrix_from_json(zdkit::load_json_file(path))};
  });
}

zd_status zd_matrix_to_json(const zd_matrix* m, char** json) {
  return guarded([&] {
    require(m, "matrix");
    require(json, "json");
    emit(json, {{"matrix", zdkit::matrix_to_json(m->value)}});
  });
}

zd_status zd_analyze(const zd_matrix* l, zd_markov_summary* summary, char** json) {
  return guarded([&] {
    require(l, "matrix");
    const auto report = zdkit::analyze(l->value);
    if (summary) {
      summary->primitive = report.primitive;
      summary->witness = report.witness;
      summary->rank_defect = report.rank_defect;
      summary->limit_converged = report.limit_converged;
      summary->limit_identical_columns = report.limit_identical_columns;
      summary->has_stationary = !report.stationary.empty();
    }
    emit(json, zdkit::markov_report_to_json(report));
  });
}

zd_status zd_stationary(const zd_matrix* l, double* out, size_t capacity) {
  return guarded([&] {
    require(l, "matrix");
    write_values(zdkit::stationary_nullspace(l->value), out, capacity);
  });
}

zd_status zd_game_load(const char* path, zd_game** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new zd_game{zdkit::game_from_json(zdkit::load_json_file(path))};
  });
}

zd_status zd_game_parse(const char* json, zd_game** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new zd_game{zdkit::game_from_json(zdkit::parse_json(json, "game"))};
  });
}

void zd_game_destroy(zd_game* g) { delete g; }

zd_status zd_game_players(const zd_game* g, int* players, size_t* profiles) {
  return guarded([&] {
    require(g, "game");
    if (players) *players = g->value.players();
    if (profiles) *profiles = g->value.profile_count();
  });
}

zd_status zd_game_strategy_count(const zd_game* g, int player, int* count) {
  return guarded([&] {
    require(g, "game");
    require(count, "count");
    *count = g->value.strategy_count(player);
  });
}

zd_status zd_game_phi(const zd_game* g, int player, int strategy, size_t* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(g, "game");
    const auto phi = g->value.indexer().phi(player, strategy);
    if (count) *count = phi.size();
    if (out == nullptr && capacity == 0) return;
    require(out, "out");
    require_capacity(phi.size(), capacity);
    std::copy(phi.begin(), phi.end(), out);
  });
}

zd_status zd_game_xi(const zd_game* g, int player, int strategy, double* out, size_t capacity) {
  return guarded([&] {
    require(g, "game");
    write_values(g->value.indexer().xi(player, strategy), out, capacity);
  });
}

zd_status zd_game_to_json(const zd_game* g, char** json) {
  return guarded([&] {
    require(g, "game");
    require(json, "json");
    emit(json, zdkit::game_to_json(g->value));
  });
}

zd_status zd_design(const zd_game* g, int designer, const zd_relation* relations, size_t count, zd_assignment** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    if (count > 0) require(relations, "relations");
    std::vector<zdkit::RowSpec> specs;
    std::vector<bool> is_auto;
    for (std::size_t r = 0; r < count; ++r) {
      specs.push_back(row_spec(g->value, relations[r]));
      is_auto.push_back(relations[r].auto_mu != 0);
    }
    *out = new zd_assignment{design_with_auto(g->value, designer, std::move(specs), is_auto)};
  });
}

zd_status zd_design_from_specs(const zd_game* g, int designer, const char* const* specs, size_t count,
                               const char* const* mus, size_t mu_count, zd_assignment** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    if (count > 0) require(specs, "specs");
    if (mu_count != 1 && mu_count != count) {
      throw BadArgument{"got " + std::to_string(mu_count) + " mu values for " + std::to_string(count) +
                        " relations; give one or one per relation"};
    }
    require(mus, "mus");
    std::vector<zdkit::RowSpec> rows;
    std::vector<bool> is_auto;
    for (std::size_t r = 0; r < count; ++r) {
      require(specs[r], "spec");
      const char* mu_text = mus[mu_count == 1 ? 0 : r];
      require(mu_text, "mu");
      auto spec = zdkit::parse_relation_spec(specs[r], g->value, designer);
      const auto mu = zdkit::parse_mu(mu_text);
      spec.mu = mu.value_or(0.0);
      is_auto.push_back(!mu.has_value());
      rows.push_back(std::move(spec));
    }
    *out = new zd_assignment{design_with_auto(g->value, designer, std::move(rows), is_auto)};
  });
}

zd_status zd_mu_interval(const zd_game* g, int designer, const zd_relation* relation, double* lo, double* hi) {
  return guarded([&] {
    require(g, "game");
    require(relation, "relation");
    const auto spec = row_spec(g->value, *relation);
    const auto in = zdkit::feasible_mu_interval(g->value, designer, spec.strategy, spec.relation);
    if (lo) *lo = in.lo;
    if (hi) *hi = in.hi;
  });
}

zd_status zd_assignment_load(const char* path, zd_assignment** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new zd_assignment{zdkit::assignment_from_json(zdkit::load_json_file(path))};
  });
}

zd_status zd_assignment_parse(const char* json, zd_assignment** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new zd_assignment{zdkit::assignment_from_json(zdkit::parse_json(json, "assignment"))};
  });
}

void zd_assignment_destroy(zd_assignment* a) { delete a; }

zd_status zd_assignment_to_json(const zd_assignment* a, char** json) {
  return guarded([&] {
    require(a, "assignment");
    require(json, "json");
    emit(json, zdkit::assignment_to_json(a->value));
  });
}

zd_status zd_assignment_designer(const zd_assignment* a, int* designer) {
  return guarded([&] {
    require(a, "assignment");
    require(designer, "designer");
    *designer = a->value.designer();
  });
}

zd_status zd_assignment_save(const zd_assignment* a, const char* path) {
  return guarded([&] {
    require(a, "assignment");
    require(path, "path");
    zdkit::save_text_file(path, zdkit::assignment_to_json(a->value).dump(2) + "\n");
  });
}

zd_status zd_assignment_row(const zd_assignment* a, int strategy, double* out, size_t capacity) {
  return guarded([&] {
    require(a, "assignment");
    const auto& rule = a->value.rule();
    if (strategy < 1 || static_cast<std::size_t>(strategy) > rule.rows()) {
      zdkit::fail(zdkit::ErrorKind::domain, "strategy " + std::to_string(strategy) + " outside 1.." + std::to_string(rule.rows()));
    }
    write_values(rule.row_vector(static_cast<std::size_t>(strategy - 1)), out, capacity);
  });
}

zd_status zd_assignment_rationality(const zd_assignment* a, int* rational, char** json) {
  return guarded([&] {
    require(a, "assignment");
    const auto report = zdkit::rationality_check(a->value);
    if (rational) *rational = report.rational;
    emit(json, rationality_json(a->value, report));
  });
}

zd_status zd_rules_load(const char* path, zd_rules** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new zd_rules{zdkit::rules_from_json(zdkit::load_json_file(path))};
  });
}

zd_status zd_rules_parse(const char* json, zd_rules** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new zd_rules{zdkit::rules_from_json(zdkit::parse_json(json, "opponents"))};
  });
}

zd_status zd_rules_random(const zd_game* g, int designer, uint64_t seed, zd_rules** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    std::mt19937_64 rng(seed);
    *out = new zd_rules{zdkit::random_opponents(g->value, designer, rng)};
  });
}

void zd_rules_destroy(zd_rules* r) { delete r; }

zd_status zd_rules_to_json(const zd_rules* r, char** json) {
  return guarded([&] {
    require(r, "rules");
    require(json, "json");
    emit(json, zdkit::rules_to_json(r->value));
  });
}

zd_status zd_transition_matrix(const zd_game* g, const zd_assignment* a, const zd_rules* opponents, zd_matrix** out) {
  return guarded([&] {
    require(g, "game");
    require(a, "assignment");
    require(opponents, "opponents");
    require(out, "out");
    *out = new zd_matrix{transition(g->value, a->value, opponents->value)};
  });
}

zd_status zd_verify(const zd_game* g, const zd_assignment* a, const zd_rules* opponents, double tol, int* effective,
                    char** json) {
  return guarded([&] {
    require(g, "game");
    require(a, "assignment");
    require(opponents, "opponents");
    const auto report = zdkit::verify_effectiveness(g->value, a->value, opponents->value, tol);
    if (effective) *effective = report.effective;
    auto j = zdkit::effectiveness_to_json(report);
    j["tolerance"] = tol;
    emit(json, j);
  });
}

zd_status zd_verify_random(const zd_game* g, const zd_assignment* a, size_t trials, uint64_t seed, double tol,
                           int* all_effective, char** json) {
  return guarded([&] {
    require(g, "game");
    require(a, "assignment");
    if (trials == 0) zdkit::fail(zdkit::ErrorKind::domain, "need at least one trial");
    std::mt19937_64 rng(seed);
    bool all = true;
    double worst = 0.0;
    zdkit::Json list = zdkit::Json::array();
    for (std::size_t t = 0; t < trials; ++t) {
      const auto opponents = zdkit::random_opponents(g->value, a->value.designer(), rng);
      const auto report = zdkit::verify_effectiveness(g->value, a->value, opponents, tol);
      all = all && report.effective;
      for (double r : report.residuals) worst = std::max(worst, r);
      auto entry = zdkit::effectiveness_to_json(report);
      entry["trial"] = t + 1;
      list.push_back(std::move(entry));
    }
    if (all_effective) *all_effective = all;
    emit(json, {{"seed", seed}, {"trials", trials}, {"tolerance", tol}, {"all_effective", all},
                {"max_residual", worst}, {"results", list}});
  });
}

zd_status zd_simulate(const zd_matrix* l, const zd_game* g, const zd_assignment* a, size_t start, size_t steps,
                      uint64_t seed, double z, int* pass, char** json) {
  return guarded([&] {
    require(l, "matrix");
    if (a != nullptr) require(g, "game");
    const auto& matrix = l->value;
    if (g != nullptr && g->value.profile_count() != matrix.rows()) {
      zdkit::fail(zdkit::ErrorKind::dimension, "game has " + std::to_string(g->value.profile_count()) +
                                                   " profiles but the matrix is " + std::to_string(matrix.rows()) + " x " +
                                                   std::to_string(matrix.cols()));
    }
    std::vector<std::vector<double>> payoffs;
    if (g != nullptr) payoffs = g->value.payoffs();
    const auto exact = zdkit::stationary_nullspace(matrix);
    const auto trajectory = zdkit::simulate(matrix, start, steps, seed, payoffs);
    const auto comparison = zdkit::compare_empirical_vs_exact(trajectory, exact, payoffs, z, &matrix);
    if (pass) *pass = comparison.pass;
    auto j = zdkit::simulation_report_to_json(trajectory, exact, comparison, z);
    if (a != nullptr) {
      zdkit::Json relations = zdkit::Json::array();
      for (const auto& d : a->value.designed()) {
        relations.push_back({{"row", d.strategy},
                             {"value", d.relation.evaluate(trajectory.payoffs)},
                             {"relative_residual", d.relation.relative_residual(trajectory.payoffs)}});
      }
      j["relations"] = relations;
    }
    emit(json, j);
  });
}

zd_status zd_network_load(const char* path, zd_network** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new zd_network{zdkit::network_from_json(zdkit::load_json_file(path))};
  });
}

zd_status zd_network_parse(const char* json, zd_network** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new zd_network{zdkit::network_from_json(zdkit::parse_json(json, "network"))};
  });
}

void zd_network_destroy(zd_network* n) { delete n; }

zd_status zd_neg_reduce(const zd_network* n, const char* node, zd_game** out, char** json) {
  return guarded([&] {
    require(n, "network");
    require(node, "node");
    require(out, "out");
    auto fop = zdkit::reduce_to_fop(n->value, node);
    emit(json, zdkit::fop_to_json(fop));
    *out = new zd_game{std::move(fop.game)};
  });
}

}  // extern "C"
