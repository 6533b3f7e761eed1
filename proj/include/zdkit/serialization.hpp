#pragma once

// JSON documents for games, assignments, opponent rules, transition
// matrices, networks and reports. Doubles are written in shortest
// round-trip form, so load(save(x)) == x bit for bit.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zdkit/evolution.hpp"
#include "zdkit/game.hpp"
#include "zdkit/neg.hpp"
#include "zdkit/simulation.hpp"
#include "zdkit/zd_design.hpp"

namespace zdkit {

using Json = nlohmann::json;

// Parses text, converting syntax errors (with line/column) into parse errors.
Json parse_json(std::string_view text, std::string_view what = "document");
Json load_json_file(const std::filesystem::path& path);
void save_text_file(const std::filesystem::path& path, const std::string& text);

// {players, strategy_counts, payoffs, labels?}
Game game_from_json(const Json& j);
Json game_to_json(const Game& game);

// {designer, relations: [{coeffs, constant, mu, row_index}], rows, fixed_rows?}
ZDAssignment assignment_from_json(const Json& j);
Json assignment_to_json(const ZDAssignment& assignment);

// {rules: [{player, matrix}]}
std::vector<StrategyRule> rules_from_json(const Json& j);
Json rules_to_json(std::span<const StrategyRule> rules);

// {matrix: [[...], ...]} or a bare array of rows
DenseMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const DenseMatrix& m);

// {nodes, edges: [[u, v], ...], base_game: {k, payoff_bimatrix, labels?}}
NetworkGame network_from_json(const Json& j);
Json network_to_json(const NetworkGame& net);

Json fop_to_json(const FOPGame& fop);
Json markov_report_to_json(const MarkovReport& report);
Json rationality_to_json(const RationalityReport& report);
Json effectiveness_to_json(const EffectivenessReport& report);
Json mu_interval_to_json(const MuInterval& interval);
Json simulation_report_to_json(const Trajectory& trajectory, std::span<const double> exact,
                               const ComparisonReport& comparison, double z_threshold);

// One designed row from text:
//   <row>:pin:<player>:<value>
//   <row>:extort:<player>:<factor>:<reference>
//   <row>:linear:<a_1>,...,<a_n>:<a_0>
// mu is left at 0 for the caller to fill.
RowSpec parse_relation_spec(std::string_view text, const Game& game, int designer);
// A number, or "auto" (returns nullopt).
std::optional<double> parse_mu(std::string_view text);

}  // namespace zdkit
