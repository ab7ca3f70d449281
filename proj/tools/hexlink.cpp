#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hexlink/challenges.hpp"
#include "hexlink/json.hpp"
#include "hexlink/render.hpp"

namespace {

using namespace hexlink;

enum Exit { ok = 0, no_solution = 1, usage = 2, data = 3 };

struct Options {
  std::string pieces = "builtin";
  std::string board = "builtin";
  std::string puzzle;
  std::string pack;
  std::string format = "text";
  std::string out;
  std::string level;
  int transition = 3;
  bool no_linkage = false;
  bool no_heatsort = false;
  bool no_pairwise = false;
  bool no_budget = false;
  bool pruned = false;
  std::size_t count = 1;
  int missing = 0;
  int generate = 0;
  std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error("cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

SolverConfig solver_config(const Options& o) {
  SolverConfig c;
  c.transition_level = o.transition;
  c.use_linkage = !o.no_linkage;
  c.use_heatsort = !o.no_heatsort;
  c.use_pairwise = !o.no_pairwise;
  c.use_budget = !o.no_budget;
  c.seed = o.seed;
  return c;
}

std::string fingerprint(const SolverConfig& c) {
  return "T=" + std::to_string(c.transition_level) + " linkage=" + (c.use_linkage ? "1" : "0") +
         " heatsort=" + (c.use_heatsort ? "1" : "0") + " pairwise=" + (c.use_pairwise ? "1" : "0") +
         " budget=" + (c.use_budget ? "1" : "0");
}

struct Context {
  BoardMap board;
  PieceSet pieces;
};

Context load_context(const Options& o) {
  Context c;
  std::vector<std::string> warnings;
  c.board = o.board == "builtin" ? builtin_board() : load_board(read_file(o.board), &warnings);
  c.pieces = o.pieces == "builtin" ? builtin_pieces() : load_pieces(read_file(o.pieces));
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return c;
}

Puzzle load_puzzle(const Options& o, const Context& ctx) {
  if (o.puzzle.empty()) return {};
  return parse_puzzle(read_file(o.puzzle), ctx.board, ctx.pieces);
}

Occupancy occupancy_of(const Context& ctx, const std::vector<Placement>& list) {
  Occupancy occ(ctx.board, ctx.pieces);
  for (const Placement& p : list) occ.place(p);
  return occ;
}

void require_format(const Options& o, std::initializer_list<std::string_view> allowed) {
  for (auto f : allowed)
    if (o.format == f) return;
  throw CLI::ValidationError("--format", "'" + o.format + "' is not supported by this subcommand");
}

int cmd_solve(const Options& o) {
  require_format(o, {"text", "json", "svg"});
  Context ctx = load_context(o);
  Puzzle puzzle = load_puzzle(o, ctx);
  Solver solver(ctx.board, ctx.pieces);
  SolverConfig cfg = solver_config(o);
  cfg.solution_limit = o.count;
  // asking for more than one solution means counting, so no uniqueness shortcuts
  if (o.count > 1) cfg.uniqueness_assumed = false;
  SolveResult r = solver.solve(puzzle, cfg);

  if (o.format == "json") {
    json sols = json::array();
    for (const Solution& s : r.solutions) sols.push_back(to_json(ctx.pieces, s.placements));
    write_output(o, dump({{"solutions", sols}, {"count", r.solutions.size()}, {"stats", to_json(r.stats)}}));
  } else if (o.format == "svg") {
    if (!r.solutions.empty()) write_output(o, render_svg(occupancy_of(ctx, r.solutions.front().placements)));
  } else {
    std::string text;
    for (std::size_t i = 0; i < r.solutions.size(); ++i)
      text += (i ? "\n" : "") + serialize_solution(r.solutions[i], ctx.pieces);
    write_output(o, text);
    std::cerr << "solutions " << r.solutions.size() << " nodes " << r.stats.nodes_expanded
              << " first_solution_index " << r.stats.first_solution_index << " wall_ms " << r.stats.wall_ms << '\n';
  }
  return r.solutions.empty() ? no_solution : ok;
}

int cmd_verify(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  if (o.puzzle.empty()) throw CLI::RequiredError("--puzzle");
  std::string text = read_file(o.puzzle);
  bool valid = false;
  std::string reason;
  try {
    valid = verify(ctx.board, ctx.pieces, parse_solution(text, ctx.board, ctx.pieces));
    if (!valid) reason = "pieces are not linked into one connected graph";
  } catch (const InvalidPuzzle& e) {
    reason = e.what();
  }
  if (o.format == "json") {
    json j{{"valid", valid}};
    if (!valid) j["reason"] = reason;
    write_output(o, dump(j));
  } else {
    write_output(o, valid ? "valid\n" : "invalid: " + reason + "\n");
  }
  return valid ? ok : no_solution;
}

int cmd_enumerate(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  Puzzle puzzle = load_puzzle(o, ctx);
  Occupancy occ = occupancy_of(ctx, puzzle.givens);
  auto legal = enumerate_legal(ctx.board, ctx.pieces, occ, all_pieces_mask(ctx.pieces));
  std::vector<int> counts(static_cast<std::size_t>(ctx.pieces.size()), 0);
  for (const Placement& p : legal) ++counts[static_cast<std::size_t>(p.piece)];

  if (o.format == "json") {
    json c = json::object();
    for (int i = 0; i < ctx.pieces.size(); ++i)
      if (!occ.has_piece(i)) c[ctx.pieces[i].name] = counts[static_cast<std::size_t>(i)];
    write_output(o, dump({{"counts", c}, {"total", legal.size()}}));
  } else {
    std::string text;
    for (int i = 0; i < ctx.pieces.size(); ++i)
      if (!occ.has_piece(i)) text += ctx.pieces[i].name + " " + std::to_string(counts[static_cast<std::size_t>(i)]) + "\n";
    text += "total " + std::to_string(legal.size()) + "\n";
    write_output(o, text);
  }
  return ok;
}

int cmd_heatmap(const Options& o) {
  Context ctx = load_context(o);
  Puzzle puzzle = load_puzzle(o, ctx);
  Solver solver(ctx.board, ctx.pieces);
  const PlacementTable& tab = solver.table();
  PartialAssignment a(ctx.pieces.size());
  for (const Placement& p : puzzle.givens) a.add(tab, *tab.index_of(p));
  CandidateTable cands = CandidateTable::from_assignment(tab, a);
  if (o.pruned) {
    for (;;) {
      if (singleton_pass(cands, a).unsolvable) break;
      if (o.no_pairwise || pairwise_pass(cands) == 0) break;
    }
  }
  HeatMap h = heat(cands);
  if (o.format == "json") write_output(o, dump(to_json(ctx.board, h)));
  else if (o.format == "svg") write_output(o, render_svg(ctx.board, h));
  else write_output(o, render_ascii(ctx.board, h));
  return ok;
}

int cmd_prune(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  Puzzle puzzle = load_puzzle(o, ctx);
  Solver solver(ctx.board, ctx.pieces);
  const PlacementTable& tab = solver.table();
  PartialAssignment a(ctx.pieces.size());
  for (const Placement& p : puzzle.givens) a.add(tab, *tab.index_of(p));
  CandidateTable cands = CandidateTable::from_assignment(tab, a);
  std::vector<int> before(static_cast<std::size_t>(ctx.pieces.size()), 0);
  for (int i = 0; i < ctx.pieces.size(); ++i)
    if (cands.is_remaining(i)) before[static_cast<std::size_t>(i)] = cands.count(i);

  std::vector<int> committed;
  int removed = 0;
  bool unsolvable = false;
  for (;;) {
    auto s = singleton_pass(cands, a);
    committed.insert(committed.end(), s.committed.begin(), s.committed.end());
    if (s.unsolvable) {
      unsolvable = true;
      break;
    }
    if (o.no_pairwise || cands.remaining() == 0) break;
    int n = pairwise_pass(cands);
    removed += n;
    if (n == 0) break;
  }
  HeatMap h = heat(cands);
  BudgetState b = compute_budget(a, h);
  bool feasible = budget_check(b, spot_partitions(ctx.board.size(), ctx.pieces.totals()));

  json pieces = json::array();
  std::string text;
  for (int i = 0; i < ctx.pieces.size(); ++i) {
    if (!before[static_cast<std::size_t>(i)] && !cands.is_remaining(i)) continue;
    int after = cands.is_remaining(i) ? cands.count(i) : 0;
    pieces.push_back({{"name", ctx.pieces[i].name}, {"before", before[static_cast<std::size_t>(i)]}, {"after", after}});
    text += ctx.pieces[i].name + " " + std::to_string(before[static_cast<std::size_t>(i)]) + " -> " +
            std::to_string(after) + "\n";
  }
  std::vector<Placement> forced;
  for (int idx : committed) forced.push_back(tab.placement(idx));
  if (o.format == "json") {
    write_output(o, dump({{"pieces", pieces},
                          {"committed", to_json(ctx.pieces, forced)},
                          {"removed", removed},
                          {"unsolvable", unsolvable},
                          {"budget",
                           {{"dead_empty", b.dead_empty},
                            {"dead_balls", b.dead_balls},
                            {"dead_sockets", b.dead_sockets},
                            {"feasible", feasible}}}}));
  } else {
    for (const Placement& p : forced) text += "forced " + format_placement(ctx.pieces, p) + "\n";
    text += "removed " + std::to_string(removed) + "\n";
    text += "budget dead_empty=" + std::to_string(b.dead_empty) + " dead_balls=" + std::to_string(b.dead_balls) +
            " dead_sockets=" + std::to_string(b.dead_sockets) + (feasible ? " feasible" : " infeasible") + "\n";
    if (unsolvable) text += "unsolvable\n";
    write_output(o, text);
  }
  return unsolvable || !feasible ? no_solution : ok;
}

GenerateSpec generate_spec(const Options& o) {
  GenerateSpec spec;
  if (!o.level.empty()) {
    auto l = level_from_string(o.level);
    if (!l) throw CLI::ValidationError("--level", "unknown level '" + o.level + "'");
    spec.level = l;
    spec.min_missing = missing_range(*l).lo;
    spec.max_missing = missing_range(*l).hi;
  }
  if (o.missing) spec.min_missing = spec.max_missing = o.missing;
  return spec;
}

int cmd_generate(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  Solver solver(ctx.board, ctx.pieces);
  GenerateSpec spec = generate_spec(o);
  json pack = json::array();
  std::string text;
  for (std::size_t i = 0; i < o.count; ++i) {
    Challenge c = generate_challenge(solver, o.seed, i, spec);
    pack.push_back(to_json(ctx.pieces, c));
    text += (i ? "\n" : "") + serialize_puzzle(c.puzzle, ctx.pieces);
  }
  write_output(o, o.format == "json" ? dump(pack) : text);
  return ok;
}

int cmd_bench(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  Solver solver(ctx.board, ctx.pieces);
  SolverConfig cfg = solver_config(o);

  std::vector<Challenge> challenges;
  if (!o.pack.empty()) {
    json j = json::parse(read_file(o.pack));
    for (const auto& x : j) challenges.push_back(challenge_from_json(ctx.pieces, ctx.board, x));
  } else if (o.generate > 0) {
    GenerateSpec spec = generate_spec(o);
    for (int i = 0; i < o.generate; ++i)
      challenges.push_back(generate_challenge(solver, o.seed, static_cast<std::uint64_t>(i), spec));
  } else {
    throw CLI::RequiredError("--generate or --pack");
  }

  json rows = json::array();
  std::string csv = "id,missing,level,solved,nodes,first_solution_index,root_linkable,root_legal,wall_ms,config\n";
  for (std::size_t i = 0; i < challenges.size(); ++i) {
    const Challenge& c = challenges[i];
    json row{{"id", i}, {"missing", c.missing()}, {"level", c.level ? json(std::string(to_string(*c.level))) : json(nullptr)}};
    try {
      SolveResult r = solver.solve(c.puzzle, cfg);
      bool solved = !r.solutions.empty();
      json st = to_json(r.stats);
      row["solved"] = solved;
      row["matches_ground_truth"] = solved && r.solutions.front() == c.ground_truth;
      row["nodes"] = r.stats.nodes_expanded;
      row["first_solution_index"] = r.stats.first_solution_index;
      row["ratios"] = st["ratios"];
      row["root_ratio"] = st["root_ratio"];
      row["wall_ms"] = r.stats.wall_ms;
      std::ostringstream line;
      line << i << ',' << c.missing() << ',' << (c.level ? to_string(*c.level) : "") << ',' << (solved ? 1 : 0) << ','
           << r.stats.nodes_expanded << ',' << r.stats.first_solution_index << ','
           << (r.stats.root_ratio ? std::to_string(r.stats.root_ratio->linkable) : "") << ','
           << (r.stats.root_ratio ? std::to_string(r.stats.root_ratio->legal) : "") << ',' << r.stats.wall_ms << ','
           << fingerprint(cfg) << '\n';
      csv += line.str();
    } catch (const Error& e) {
      row["error"] = e.what();
      csv += std::to_string(i) + "," + std::to_string(c.missing()) + ",,error,,,,,," + fingerprint(cfg) + "\n";
    }
    row["config"] = fingerprint(cfg);
    rows.push_back(row);
  }
  write_output(o, o.format == "json" ? dump({{"seed", o.seed}, {"config", fingerprint(cfg)}, {"rows", rows}}) : csv);
  return ok;
}

// Node-count medians per level anchor over freshly generated challenges.
int cmd_calibrate(const Options& o) {
  require_format(o, {"text", "json"});
  Context ctx = load_context(o);
  Solver solver(ctx.board, ctx.pieces);
  int per = o.generate > 0 ? o.generate : 25;
  std::vector<std::pair<int, std::uint64_t>> samples;
  std::uint64_t job = 0;
  for (int k : {3, 5, 7, 8}) {
    GenerateSpec spec;
    spec.min_missing = spec.max_missing = k;
    for (int i = 0; i < per; ++i) {
      Challenge c = generate_challenge(solver, o.seed, job++, spec);
      samples.emplace_back(k, c.stats.nodes_expanded);
    }
  }
  GradeThresholds t = calibrate_thresholds(samples);
  if (o.format == "json") {
    write_output(o, dump({{"seed", o.seed}, {"per_level", per}, {"ceilings", t.ceiling}}));
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.ceiling.size(); ++i)
      os << to_string(kLevels[i]) << ' ' << t.ceiling[i] << '\n';
    write_output(o, os.str());
  }
  return ok;
}

// Renders a puzzle or solution file; solution files parse as puzzles.
int cmd_render(const Options& o) {
  Context ctx = load_context(o);
  Puzzle puzzle = load_puzzle(o, ctx);
  Occupancy occ = occupancy_of(ctx, puzzle.givens);
  if (o.format == "json") write_output(o, dump(to_json(occ)));
  else if (o.format == "svg") write_output(o, render_svg(occ));
  else write_output(o, render_ascii(occ));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver, analyzer and generator for hexagonal linkage puzzles"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--pieces", o.pieces, "piece file or 'builtin'");
  app.add_option("--board", o.board, "board file or 'builtin'");
  app.add_option("--puzzle", o.puzzle, "puzzle or solution file");
  app.add_option("--transition", o.transition, "remaining-piece count at which the linkage filter is dropped")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-linkage", o.no_linkage, "disable the linkage filter");
  app.add_flag("--no-heatsort", o.no_heatsort, "disable heat ordering");
  app.add_flag("--no-pairwise", o.no_pairwise, "disable pairwise pruning");
  app.add_flag("--no-budget", o.no_budget, "disable the ball/socket budget check");
  app.add_option("--count", o.count, "solutions to find (solve) or challenges to emit (generate)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--format", o.format, "text, json or svg")->check(CLI::IsMember({"text", "json", "svg"}));
  app.add_option("--out", o.out, "write output here instead of stdout");

  auto* solve = app.add_subcommand("solve", "solve a puzzle");
  auto* verify = app.add_subcommand("verify", "check a solution file");
  auto* enumerate = app.add_subcommand("enumerate", "count legal placements per piece");
  auto* heatmap = app.add_subcommand("heatmap", "coverage of spot halves by candidate placements");
  heatmap->add_flag("--pruned", o.pruned, "apply singleton and pairwise pruning first");
  auto* prune = app.add_subcommand("prune", "run the pruning passes and report what they remove");
  auto* generate = app.add_subcommand("generate", "generate certified challenges");
  auto* bench = app.add_subcommand("bench", "solve a challenge set and report search statistics");
  auto* render = app.add_subcommand("render", "draw a puzzle or solution");
  auto* calibrate = app.add_subcommand("calibrate", "derive grading node ceilings from generated challenges");
  calibrate->add_option("--generate", o.generate, "challenges per level anchor")->check(CLI::PositiveNumber);
  for (auto* sub : {generate, bench}) {
    sub->add_option("--missing", o.missing, "pieces to remove")->check(CLI::Range(1, kPieceCount));
    sub->add_option("--level", o.level, "target level: Starter, Junior, Expert, Master or Wizard");
  }
  bench->add_option("--generate", o.generate, "generate this many challenges")->check(CLI::PositiveNumber);
  bench->add_option("--pack", o.pack, "challenge pack JSON from 'generate --format json'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*verify) return cmd_verify(o);
    if (*enumerate) return cmd_enumerate(o);
    if (*heatmap) return cmd_heatmap(o);
    if (*prune) return cmd_prune(o);
    if (*generate) return cmd_generate(o);
    if (*bench) return cmd_bench(o);
    if (*render) return cmd_render(o);
    if (*calibrate) return cmd_calibrate(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return data;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return data;
  }
  return usage;
}
