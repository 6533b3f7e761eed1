// zdkit command-line front end. Talks to the library only through zdkit.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zdkit/zdkit.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 20240607;
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;

struct Failure {
  int code;
  std::string message;
};

void check(zd_status s, const std::string& context) {
  if (s == ZD_OK) return;
  // An analysis error means the input was well formed but a required property does not hold.
  const int code = s == ZD_ANALYSIS ? kExitCheckFailed : kExitInput;
  throw Failure{code, context + ": " + zd_status_name(s) + ": " + zd_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Matrix = std::unique_ptr<zd_matrix, Deleter<zd_matrix, zd_matrix_destroy>>;
using GameHandle = std::unique_ptr<zd_game, Deleter<zd_game, zd_game_destroy>>;
using Assignment = std::unique_ptr<zd_assignment, Deleter<zd_assignment, zd_assignment_destroy>>;
using Rules = std::unique_ptr<zd_rules, Deleter<zd_rules, zd_rules_destroy>>;
using Network = std::unique_ptr<zd_network, Deleter<zd_network, zd_network_destroy>>;

Json take_json(char* text) {
  std::unique_ptr<char, void (*)(char*)> owned(text, zd_string_free);
  return Json::parse(owned.get());
}

GameHandle load_game(const std::string& path) {
  zd_game* g = nullptr;
  check(zd_game_load(path.c_str(), &g), "loading game " + path);
  return GameHandle(g);
}

Assignment load_assignment(const std::string& path) {
  zd_assignment* a = nullptr;
  check(zd_assignment_load(path.c_str(), &a), "loading assignment " + path);
  return Assignment(a);
}

Rules load_rules(const std::string& path) {
  zd_rules* r = nullptr;
  check(zd_rules_load(path.c_str(), &r), "loading opponents " + path);
  return Rules(r);
}

Matrix load_matrix(const std::string& path) {
  zd_matrix* m = nullptr;
  check(zd_matrix_load(path.c_str(), &m), "loading matrix " + path);
  return Matrix(m);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure{kExitInput, "cannot write " + path.string()};
  out << text;
}

// ---- table rendering for --pretty ----

std::string cell(const Json& v) {
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    bool flat = true;
    for (const auto& e : v) flat = flat && e.is_primitive();
    if (flat) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : " ") + cell(e);
      return s;
    }
  }
  return v.dump();
}

void render(std::ostream& os, const Json& j, const std::string& indent);

void render_table(std::ostream& os, const Json& rows, const std::string& indent) {
  std::vector<std::string> columns;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.items())
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(c.size());
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      line.push_back(r.contains(columns[c]) ? cell(r[columns[c]]) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto print = [&](const std::vector<std::string>& line) {
    os << indent;
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << line[c];
      if (c + 1 < line.size()) os << std::string(width[c] - line[c].size() + 2, ' ');
    }
    os << '\n';
  };
  print(columns);
  for (const auto& line : cells) print(line);
}

void render(std::ostream& os, const Json& j, const std::string& indent) {
  std::size_t key_width = 0;
  for (const auto& [k, v] : j.items()) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : j.items()) {
    const bool object_rows = v.is_array() && !v.empty() && v.front().is_object();
    if (v.is_object()) {
      os << indent << k << ":\n";
      render(os, v, indent + "  ");
    } else if (object_rows) {
      os << indent << k << ":\n";
      render_table(os, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_array()) {
      os << indent << k << ":\n";
      for (const auto& row : v) os << indent << "  " << cell(row) << '\n';
    } else {
      os << indent << k << std::string(key_width - k.size() + 2, ' ') << cell(v) << '\n';
    }
  }
}

void report(const Json& j, bool pretty, const std::string& out) {
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  if (pretty) {
    render(std::cout, j, "");
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

// ---- subcommands ----

struct Options {
  std::string game, assignment, opponents, matrix, network, node, out;
  std::vector<std::string> relations;
  std::vector<std::string> mus{"auto"};
  int designer = 1;
  std::size_t random_opponents = 0;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-8;
  std::size_t steps = 1'000'000;
  std::size_t start = 1;
  double z = 4.0;
  bool pretty = false;
};

Assignment design(const zd_game* game, const Options& o) {
  std::vector<const char*> specs;
  for (const auto& r : o.relations) specs.push_back(r.c_str());
  std::vector<const char*> mus;
  for (const auto& m : o.mus) mus.push_back(m.c_str());
  zd_assignment* a = nullptr;
  check(zd_design_from_specs(game, o.designer, specs.data(), specs.size(), mus.data(), mus.size(), &a), "design");
  return Assignment(a);
}

int cmd_design(const Options& o) {
  const auto game = load_game(o.game);
  const auto a = design(game.get(), o);
  int rational = 0;
  char* text = nullptr;
  check(zd_assignment_rationality(a.get(), &rational, &text), "rationality");
  Json rep = take_json(text);
  char* assignment_text = nullptr;
  check(zd_assignment_to_json(a.get(), &assignment_text), "assignment");
  Json assignment = take_json(assignment_text);
  if (!o.out.empty()) {
    check(zd_assignment_save(a.get(), o.out.c_str()), "saving assignment");
    rep["assignment_file"] = o.out;
  } else {
    rep["assignment"] = assignment;
  }
  report(rep, o.pretty, "");
  return rational ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const Options& o) {
  const auto game = load_game(o.game);
  const auto a = load_assignment(o.assignment);
  char* text = nullptr;
  int ok = 0;
  if (!o.opponents.empty()) {
    const auto rules = load_rules(o.opponents);
    check(zd_verify(game.get(), a.get(), rules.get(), o.tol, &ok, &text), "verify");
  } else {
    check(zd_verify_random(game.get(), a.get(), o.random_opponents, o.seed, o.tol, &ok, &text), "verify");
  }
  report(take_json(text), o.pretty, o.out);
  return ok ? kExitOk : kExitCheckFailed;
}

Matrix transition_from(const Options& o, const zd_game* game, const zd_assignment* a) {
  if (!o.matrix.empty()) return load_matrix(o.matrix);
  if (game == nullptr || a == nullptr) {
    throw Failure{kExitInput, "give --matrix, or --game and --assignment with opponents"};
  }
  Rules rules;
  if (!o.opponents.empty()) {
    rules = load_rules(o.opponents);
  } else {
    zd_rules* r = nullptr;
    int designer = 0;
    check(zd_assignment_designer(a, &designer), "assignment");
    check(zd_rules_random(game, designer, o.seed, &r), "random opponents");
    rules = Rules(r);
  }
  zd_matrix* m = nullptr;
  check(zd_transition_matrix(game, a, rules.get(), &m), "transition matrix");
  return Matrix(m);
}

int cmd_analyze(const Options& o) {
  GameHandle game;
  Assignment a;
  if (o.matrix.empty()) {
    game = load_game(o.game);
    a = load_assignment(o.assignment);
  }
  const auto l = transition_from(o, game.get(), a.get());
  char* text = nullptr;
  check(zd_analyze(l.get(), nullptr, &text), "analyze");
  report(take_json(text), o.pretty, o.out);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  GameHandle game;
  Assignment a;
  if (!o.game.empty()) game = load_game(o.game);
  if (!o.assignment.empty()) a = load_assignment(o.assignment);
  const auto l = transition_from(o, game.get(), a.get());
  int pass = 0;
  char* text = nullptr;
  check(zd_simulate(l.get(), game.get(), a.get(), o.start, o.steps, o.seed, o.z, &pass, &text), "simulate");
  report(take_json(text), o.pretty, o.out);
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_neg(const Options& o) {
  zd_network* raw = nullptr;
  check(zd_network_load(o.network.c_str(), &raw), "loading network " + o.network);
  const Network net(raw);
  zd_game* g = nullptr;
  char* text = nullptr;
  check(zd_neg_reduce(net.get(), o.node.c_str(), &g, &text), "reduce");
  const GameHandle game(g);
  Json reduction = take_json(text);

  Options design_options = o;
  design_options.designer = 1;
  const auto a = design(game.get(), design_options);
  int rational = 0;
  check(zd_assignment_rationality(a.get(), &rational, &text), "rationality");
  Json rationality = take_json(text);

  int effective = 0;
  check(zd_verify_random(game.get(), a.get(), o.random_opponents, o.seed, o.tol, &effective, &text), "verify");
  Json verification = take_json(text);

  Json rep;
  rep["node"] = o.node;
  rep["degree"] = reduction["degree"];
  rep["opponent_profiles"] = reduction["opponent_profiles"];
  rep["rationality"] = rationality;
  rep["verification"] = {{"trials", verification["trials"]},
                         {"all_effective", verification["all_effective"]},
                         {"max_residual", verification["max_residual"]}};
  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    write_file(dir / "game.json", reduction["game"].dump(2) + "\n");
    check(zd_assignment_save(a.get(), (dir / "assignment.json").string().c_str()), "saving assignment");
    verification["rationality"] = rationality;
    write_file(dir / "report.json", verification.dump(2) + "\n");
    rep["written"] = {(dir / "game.json").string(), (dir / "assignment.json").string(), (dir / "report.json").string()};
  } else {
    rep["game"] = reduction["game"];
  }
  report(rep, o.pretty, "");
  return rational && effective ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-determinant strategy design for finite multi-player games"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(zd_version()));
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for every random draw")->capture_default_str();
    sub->add_option("--out", o.out, "Output path");
    sub->add_flag("--pretty", o.pretty, "Render tables instead of JSON");
  };
  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--relation", o.relations,
                    "Designed row: <row>:pin:<player>:<value> | <row>:extort:<player>:<factor>:<ref> | "
                    "<row>:linear:<a1>,..,<an>:<a0>")
        ->required();
    sub->add_option("--mu", o.mus, "mu per relation (number or auto); one value applies to all")->capture_default_str();
  };

  auto* design_cmd = app.add_subcommand("design", "Design ZD rows and check rationality");
  design_cmd->add_option("--game", o.game, "Game JSON")->required()->check(CLI::ExistingFile);
  design_cmd->add_option("--designer", o.designer, "Designing player")->capture_default_str();
  add_design(design_cmd);
  add_common(design_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check that a design is effective");
  verify_cmd->add_option("--game", o.game, "Game JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--assignment", o.assignment, "Assignment JSON")->required()->check(CLI::ExistingFile);
  auto* opp = verify_cmd->add_option("--opponents", o.opponents, "Opponent rules JSON")->check(CLI::ExistingFile);
  auto* rnd = verify_cmd->add_option("--random-opponents", o.random_opponents, "Number of random opponent sets")
                  ->check(CLI::PositiveNumber);
  opp->excludes(rnd);
  verify_cmd->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
  add_common(verify_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Markov analysis of a transition matrix");
  analyze_cmd->add_option("--matrix", o.matrix, "Transition matrix JSON")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--game", o.game, "Game JSON")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--assignment", o.assignment, "Assignment JSON")->check(CLI::ExistingFile);
  analyze_cmd->add_option("--opponents", o.opponents, "Opponent rules JSON (default: random)")->check(CLI::ExistingFile);
  add_common(analyze_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a trajectory and compare with the stationary vector");
  simulate_cmd->add_option("--matrix", o.matrix, "Transition matrix JSON")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--game", o.game, "Game JSON (adds expected payoffs)")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--assignment", o.assignment, "Assignment JSON (adds relation gaps)")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--opponents", o.opponents, "Opponent rules JSON (default: random)")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--steps", o.steps, "Trajectory length T")->capture_default_str()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--start", o.start, "Initial profile (1-based)")->capture_default_str();
  simulate_cmd->add_option("--z", o.z, "z-score threshold")->capture_default_str();
  add_common(simulate_cmd);

  auto* neg_cmd = app.add_subcommand("neg", "Reduce a network node to a two-player game, design and verify");
  neg_cmd->add_option("--network", o.network, "Network JSON")->required()->check(CLI::ExistingFile);
  neg_cmd->add_option("--node", o.node, "Focal node")->required();
  add_design(neg_cmd);
  neg_cmd->add_option("--random-opponents", o.random_opponents, "Random fictitious-opponent rule sets")
      ->check(CLI::PositiveNumber);
  neg_cmd->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
  add_common(neg_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*design_cmd) return cmd_design(o);
    if (*verify_cmd) {
      if (o.opponents.empty() && o.random_opponents == 0) throw Failure{kExitInput, "give --opponents or --random-opponents N"};
      return cmd_verify(o);
    }
    if (*analyze_cmd) return cmd_analyze(o);
    if (*simulate_cmd) return cmd_simulate(o);
    if (*neg_cmd) {
      if (o.random_opponents == 0) o.random_opponents = 10;
      return cmd_neg(o);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
