#include "zdkit/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "zdkit/error.hpp"

namespace zdkit {

namespace {

const Json& field(const Json& j, const char* name, const char* context) {
  if (!j.is_object()) fail(ErrorKind::parse, std::string(context) + ": expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) fail(ErrorKind::parse, std::string(context) + ": missing field '" + name + "'");
  return *it;
}

template <typename T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, where + ": " + e.what());
  }
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorKind::parse, where + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::parse, where + ": expected an integer");
  return j.get<int>();
}

std::vector<double> number_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::parse, where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> rows_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::parse, where + ": expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_array(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Re-tags library errors from constructors as parse errors carrying the document context.
template <typename F>
auto build(const char* context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    fail(ErrorKind::parse, std::string(context) + ": " + e.what());
  }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    fail(ErrorKind::parse, std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::parse, std::string(what) + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path.string());
}

void save_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::io, "write to " + path.string() + " failed");
}

Game game_from_json(const Json& j) {
  const int players = integer(field(j, "players", "game"), "game.players");
  const auto counts = get_as<std::vector<int>>(field(j, "strategy_counts", "game"), "game.strategy_counts");
  if (static_cast<int>(counts.size()) != players) {
    fail(ErrorKind::parse, "game: 'players' is " + std::to_string(players) + " but 'strategy_counts' lists " +
                               std::to_string(counts.size()) + " players");
  }
  auto payoffs = rows_array(field(j, "payoffs", "game"), "game.payoffs");
  std::optional<std::vector<std::vector<std::string>>> labels;
  if (j.contains("labels") && !j["labels"].is_null()) {
    labels = get_as<std::vector<std::vector<std::string>>>(j["labels"], "game.labels");
  }
  return build("game", [&] { return Game(counts, std::move(payoffs), std::move(labels)); });
}

Json game_to_json(const Game& game) {
  Json j;
  j["players"] = game.players();
  j["strategy_counts"] = game.indexer().strategy_counts();
  j["payoffs"] = game.payoffs();
  if (game.labels()) j["labels"] = *game.labels();
  return j;
}

ZDAssignment assignment_from_json(const Json& j) {
  const int designer = integer(field(j, "designer", "assignment"), "assignment.designer");
  const auto rows = rows_array(field(j, "rows", "assignment"), "assignment.rows");
  const DenseMatrix rule = build("assignment.rows", [&] { return DenseMatrix::from_rows(rows); });
  const Json& relations = field(j, "relations", "assignment");
  if (!relations.is_array()) fail(ErrorKind::parse, "assignment.relations: expected an array");
  std::vector<DesignedRow> designed;
  for (std::size_t r = 0; r < relations.size(); ++r) {
    const std::string where = "assignment.relations[" + std::to_string(r) + "]";
    const Json& rel = relations[r];
    DesignedRow row;
    row.relation.coeffs = number_array(field(rel, "coeffs", where.c_str()), where + ".coeffs");
    row.relation.constant = number(field(rel, "constant", where.c_str()), where + ".constant");
    row.mu = number(field(rel, "mu", where.c_str()), where + ".mu");
    row.strategy = integer(field(rel, "row_index", where.c_str()), where + ".row_index");
    if (row.strategy < 1 || static_cast<std::size_t>(row.strategy) > rows.size()) {
      fail(ErrorKind::parse, where + ".row_index: " + std::to_string(row.strategy) + " has no matching entry in 'rows'");
    }
    row.probabilities = rows[static_cast<std::size_t>(row.strategy - 1)];
    designed.push_back(std::move(row));
  }
  std::vector<int> fixed;
  if (j.contains("fixed_rows")) fixed = get_as<std::vector<int>>(j["fixed_rows"], "assignment.fixed_rows");
  return build("assignment", [&] { return ZDAssignment(designer, std::move(designed), std::move(fixed), rule); });
}

Json assignment_to_json(const ZDAssignment& assignment) {
  Json j;
  j["designer"] = assignment.designer();
  Json relations = Json::array();
  for (const auto& d : assignment.designed()) {
    relations.push_back({{"coeffs", d.relation.coeffs}, {"constant", d.relation.constant}, {"mu", d.mu}, {"row_index", d.strategy}});
  }
  j["relations"] = relations;
  Json rows = Json::array();
  for (std::size_t r = 0; r < assignment.rule().rows(); ++r) rows.push_back(assignment.rule().row_vector(r));
  j["rows"] = rows;
  if (!assignment.fixed_rows().empty()) j["fixed_rows"] = assignment.fixed_rows();
  return j;
}

std::vector<StrategyRule> rules_from_json(const Json& j) {
  const Json& list = field(j, "rules", "opponents");
  if (!list.is_array()) fail(ErrorKind::parse, "opponents.rules: expected an array");
  std::vector<StrategyRule> out;
  for (std::size_t r = 0; r < list.size(); ++r) {
    const std::string where = "opponents.rules[" + std::to_string(r) + "]";
    const int player = integer(field(list[r], "player", where.c_str()), where + ".player");
    const auto rows = rows_array(field(list[r], "matrix", where.c_str()), where + ".matrix");
    out.push_back(build(where.c_str(), [&] { return build_rule(player, rows); }));
  }
  return out;
}

Json rules_to_json(std::span<const StrategyRule> rules) {
  Json list = Json::array();
  for (const auto& r : rules) list.push_back({{"player", r.player()}, {"matrix", matrix_to_json(r.matrix())}});
  return {{"rules", list}};
}

DenseMatrix matrix_from_json(const Json& j) {
  const Json& rows = j.is_object() ? field(j, "matrix", "matrix file") : j;
  auto values = rows_array(rows, "matrix");
  return build("matrix", [&] { return DenseMatrix::from_rows(values); });
}

Json matrix_to_json(const DenseMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row_vector(r));
  return rows;
}

NetworkGame network_from_json(const Json& j) {
  const Json& nodes_json = field(j, "nodes", "network");
  if (!nodes_json.is_array()) fail(ErrorKind::parse, "network.nodes: expected an array");
  std::vector<std::string> nodes;
  for (const auto& n : nodes_json) {
    if (n.is_string()) {
      nodes.push_back(n.get<std::string>());
    } else if (n.is_number_integer()) {
      nodes.push_back(std::to_string(n.get<long long>()));
    } else {
      fail(ErrorKind::parse, "network.nodes: node ids must be strings or integers");
    }
  }
  auto name_of = [](const Json& n) {
    if (n.is_string()) return n.get<std::string>();
    if (n.is_number_integer()) return std::to_string(n.get<long long>());
    fail(ErrorKind::parse, "network.edges: endpoints must be strings or integers");
  };
  const Json& edges_json = field(j, "edges", "network");
  if (!edges_json.is_array()) fail(ErrorKind::parse, "network.edges: expected an array");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t e = 0; e < edges_json.size(); ++e) {
    const Json& pair = edges_json[e];
    if (!pair.is_array() || pair.size() != 2) fail(ErrorKind::parse, "network.edges[" + std::to_string(e) + "]: expected [u, v]");
    std::size_t ends[2];
    for (int s = 0; s < 2; ++s) {
      const auto name = name_of(pair[static_cast<std::size_t>(s)]);
      const auto it = std::find(nodes.begin(), nodes.end(), name);
      if (it == nodes.end()) fail(ErrorKind::parse, "network.edges[" + std::to_string(e) + "]: unknown node '" + name + "'");
      ends[s] = static_cast<std::size_t>(it - nodes.begin());
    }
    edges.emplace_back(ends[0], ends[1]);
  }

  const Json& base_json = field(j, "base_game", "network");
  BiMatrix base;
  base.strategies = integer(field(base_json, "k", "network.base_game"), "network.base_game.k");
  const Json& bm = field(base_json, "payoff_bimatrix", "network.base_game");
  if (!bm.is_array()) fail(ErrorKind::parse, "network.base_game.payoff_bimatrix: expected a k x k array of [own, other] pairs");
  for (std::size_t a = 0; a < bm.size(); ++a) {
    const std::string where = "network.base_game.payoff_bimatrix[" + std::to_string(a) + "]";
    if (!bm[a].is_array()) fail(ErrorKind::parse, where + ": expected an array");
    std::vector<std::pair<double, double>> row;
    for (std::size_t b = 0; b < bm[a].size(); ++b) {
      const auto cell = number_array(bm[a][b], where + "[" + std::to_string(b) + "]");
      if (cell.size() != 2) fail(ErrorKind::parse, where + "[" + std::to_string(b) + "]: expected [own, other]");
      row.emplace_back(cell[0], cell[1]);
    }
    base.payoff.push_back(std::move(row));
  }
  if (base_json.contains("labels")) base.labels = get_as<std::vector<std::string>>(base_json["labels"], "network.base_game.labels");
  return build("network", [&] { return NetworkGame(std::move(nodes), std::move(edges), std::move(base)); });
}

Json network_to_json(const NetworkGame& net) {
  Json edges = Json::array();
  for (const auto& [u, v] : net.edges()) edges.push_back({net.nodes()[u], net.nodes()[v]});
  Json bm = Json::array();
  for (const auto& row : net.base().payoff) {
    Json r = Json::array();
    for (const auto& [a, b] : row) r.push_back({a, b});
    bm.push_back(r);
  }
  Json base{{"k", net.base().strategies}, {"payoff_bimatrix", bm}};
  if (net.base().labels) base["labels"] = *net.base().labels;
  return {{"nodes", net.nodes()}, {"edges", edges}, {"base_game", base}};
}

Json fop_to_json(const FOPGame& fop) {
  return {{"focal", fop.focal},
          {"degree", fop.degree},
          {"opponent_profiles", fop.opponent_profiles},
          {"game", game_to_json(fop.game)}};
}

Json markov_report_to_json(const MarkovReport& report) {
  Json j{{"primitive", report.primitive},
         {"witness_s", report.primitive ? Json(report.witness) : Json(nullptr)},
         {"rank_defect", report.rank_defect},
         {"stationary", report.stationary},
         {"limit_converged", report.limit_converged},
         {"limit_identical_columns", report.limit_identical_columns}};
  return j;
}

Json rationality_to_json(const RationalityReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"row", v.strategy == 0 ? Json("sum") : Json(v.strategy)}, {"profile", v.profile}, {"value", v.value}});
  }
  return {{"rational", report.rational}, {"worst_margin", report.worst_margin}, {"violations", violations}};
}

Json effectiveness_to_json(const EffectivenessReport& report) {
  Json j{{"rational", report.rational},
         {"effective", report.effective},
         {"primitive", report.primitive},
         {"conditions", {{"limit", report.conditions.limit}, {"rank", report.conditions.rank}}},
         {"expected_payoffs", report.expected_payoffs},
         {"residuals", report.residuals}};
  if (!report.failure.empty()) j["failure"] = report.failure;
  return j;
}

Json mu_interval_to_json(const MuInterval& interval) {
  return {{"lo", finite_or_null(interval.lo)}, {"hi", finite_or_null(interval.hi)}, {"empty", interval.empty()}};
}

Json simulation_report_to_json(const Trajectory& trajectory, std::span<const double> exact,
                               const ComparisonReport& comparison, double z_threshold) {
  return {{"T", trajectory.length},
          {"seed", trajectory.seed},
          {"burn_in", trajectory.burn_in},
          {"empirical", trajectory.empirical},
          {"exact", std::vector<double>(exact.begin(), exact.end())},
          {"empirical_payoffs", trajectory.payoffs},
          {"payoff_gaps", comparison.payoff_gaps},
          {"z_scores", comparison.z_scores},
          {"z_threshold", z_threshold},
          {"max_z", comparison.max_z},
          {"pass", comparison.pass}};
}

RowSpec parse_relation_spec(std::string_view text, const Game& game, int designer) {
  const auto parts = split(text, ':');
  const std::string what = "relation '" + std::string(text) + "'";
  if (parts.size() < 2) fail(ErrorKind::parse, what + ": expected <row>:<kind>:...");
  RowSpec spec;
  spec.strategy = parse_int(parts[0], what + " row");
  const auto kind = parts[1];
  const int n = game.players();
  try {
    if (kind == "pin") {
      if (parts.size() != 4) fail(ErrorKind::parse, what + ": expected <row>:pin:<player>:<value>");
      spec.relation = LinearRelation::pinning(n, parse_int(parts[2], what + " player"), parse_double(parts[3], what + " value"));
    } else if (kind == "extort") {
      if (parts.size() != 5) fail(ErrorKind::parse, what + ": expected <row>:extort:<player>:<factor>:<reference>");
      spec.relation = LinearRelation::extortion(n, designer, parse_int(parts[2], what + " player"),
                                                parse_double(parts[3], what + " factor"),
                                                parse_double(parts[4], what + " reference"));
    } else if (kind == "linear") {
      if (parts.size() != 4) fail(ErrorKind::parse, what + ": expected <row>:linear:<a_1>,...,<a_n>:<a_0>");
      for (auto c : split(parts[2], ',')) spec.relation.coeffs.push_back(parse_double(c, what + " coefficient"));
      spec.relation.constant = parse_double(parts[3], what + " constant");
      if (static_cast<int>(spec.relation.coeffs.size()) != n) {
        fail(ErrorKind::parse, what + ": needs " + std::to_string(n) + " coefficients");
      }
    } else {
      fail(ErrorKind::parse, what + ": unknown kind '" + std::string(kind) + "' (pin, extort, linear)");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    fail(ErrorKind::parse, what + ": " + e.what());
  }
  return spec;
}

std::optional<double> parse_mu(std::string_view text) {
  if (text == "auto") return std::nullopt;
  return parse_double(text, "mu");
}

}  // namespace zdkit
