// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "hexlink/json.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace hexlink;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

const Solver& solver() { return support::solver(); }
const BoardMap& board() { return solver().board(); }
const PieceSet& pieces() { return solver().pieces(); }

constexpr std::size_t kTilings = 100;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<std::vector<Placement>> solution_set(const Puzzle& pz, SolverConfig cfg) {
  cfg.uniqueness_assumed = false;
  cfg.solution_limit = 1000;
  std::set<std::vector<Placement>> out;
  for (const auto& s : solver().solve(pz, cfg).solutions) out.insert(s.placements);
  return out;
}

// Distinct certified challenges cut from the shared tiling corpus, cycling
// through the missing counts in `ks` and keeping those accepted by `keep`.
std::vector<Challenge> corpus_challenges(std::size_t want, const std::vector<int>& ks, std::uint64_t seed,
                                         const std::function<bool(const Challenge&)>& keep) {
  std::vector<Challenge> out;
  std::set<std::vector<Placement>> seen;
  std::mt19937_64 rng(seed);
  const auto& tilings = support::tilings(kTilings);
  for (std::size_t round = 0; out.size() < want && round < 16; ++round)
    for (std::size_t i = 0; i < tilings.size() && out.size() < want; ++i) {
      int k = ks[(i + round) % ks.size()];
      auto c = make_challenge(solver(), tilings[i], k, rng);
      if (c && keep(*c) && seen.insert(c->puzzle.givens).second) out.push_back(*c);
    }
  return out;
}

const std::vector<Challenge>& small_challenges() {
  static const auto v = corpus_challenges(50, {2, 3, 4, 5, 6}, 6, [](const Challenge&) { return true; });
  return v;
}

const std::vector<Challenge>& wizard_challenges() {
  static const auto v =
      corpus_challenges(20, {8, 9, 10}, 7, [](const Challenge& c) { return c.level == Level::wizard; });
  return v;
}

const std::vector<Challenge>& expert_challenges() {
  static const auto v =
      corpus_challenges(50, {5, 6, 7, 8}, 9, [](const Challenge& c) { return c.level == Level::expert; });
  return v;
}

// Empty-board counts from the piece table.
Outcome placement_counts() {
  Outcome o;
  const std::map<std::string, int> table{
      {"light_purple", 72}, {"light_green", 144}, {"aqua", 144},      {"yellow", 152},
      {"blue", 152},        {"light_pink", 152},  {"dark_pink", 152}, {"dark_purple", 152},
      {"orange", 180},      {"red", 180},         {"dark_green", 180}, {"dark_blue", 180}};
  Occupancy empty(board(), pieces());
  int total = 0, want_total = 0;
  for (int i = 0; i < pieces().size(); ++i) {
    const std::string& name = pieces()[i].name;
    int n = static_cast<int>(enumerate_legal(board(), pieces(), empty, PieceMask{1} << i).size());
    auto it = table.find(name);
    o.check(it != table.end() && it->second == n, name + " has " + std::to_string(n));
    total += n;
    if (it != table.end()) want_total += it->second;
  }
  o.check(total == want_total, "total " + std::to_string(total));
  o.check(solver().table().placement_count() == total, "table size");
  o.detail << "total " << total << ", the sum of the per-piece values (" << want_total << ")";
  return o;
}

Outcome board_geometry() {
  Outcome o;
  auto t = oracle::path_triples(board());
  o.check(t == std::array<int, 3>{36, 76, 90}, "triples");
  Occupancy empty(board(), pieces());
  auto count = [&](const char* name) {
    return static_cast<int>(enumerate_legal(board(), pieces(), empty, PieceMask{1} << *pieces().index_of(name)).size());
  };
  o.check(count("light_green") == 4 * t[0], "144 = 36 x 4");
  o.check(count("light_purple") == 2 * t[0], "72 = 36 x 2");
  o.check(count("yellow") == 2 * t[1], "152 = 76 x 2");
  o.check(count("orange") == 2 * t[2], "180 = 90 x 2");
  o.detail << "straight " << t[0] << ", obtuse " << t[1] << ", acute " << t[2];
  return o;
}

Outcome transform_orbit() {
  Outcome o;
  const std::array<HexVec, 6> rotated{{{1, 3}, {4, -1}, {3, -4}, {-1, -3}, {-4, 1}, {-3, 4}}};
  const std::array<HexVec, 6> flipped{{{3, 1}, {4, -3}, {1, -4}, {-3, -1}, {-4, 3}, {-1, 4}}};
  std::set<std::pair<int, int>> images;
  for (int rot = 0; rot < 6; ++rot) {
    HexVec r = apply(Orientation{rot, false}, {1, 3});
    HexVec f = apply(Orientation{rot, true}, {1, 3});
    o.check(r == rotated[static_cast<std::size_t>(rot)], "rotation " + std::to_string(rot));
    o.check(f == flipped[static_cast<std::size_t>(rot)], "flipped rotation " + std::to_string(rot));
    images.insert({r.a, r.b});
    images.insert({f.a, f.b});
  }
  o.check(images.size() == 12, "12 distinct images");
  o.detail << images.size() << " images in rotation order";
  return o;
}

Outcome piece_structure() {
  Outcome o;
  ElementTotals t = pieces().totals();
  o.check(t.balls == 16 && t.sockets == 14 && t.circles == 6, "element totals");
  int mirrors = 0, elbows = 0, accepting = 0;
  std::array<int, 3> families{};
  for (const PieceDef& p : pieces()) {
    int n = distinct_pose_count(p);
    // orientation classes counted independently from distinct poses on the board
    int on_board = 0;
    std::set<oracle::PoseKey> keys;
    for (const Placement& q : oracle::poses(board(), pieces(), *pieces().index_of(p.name)))
      keys.insert(oracle::pose_key(*resolve(board(), pieces(), q)));
    on_board = static_cast<int>(keys.size());
    if (p.mirror_symmetric) {
      ++mirrors;
      o.check(n == 6, p.name + " classes");
    } else {
      o.check(n == 12, p.name + " classes");
    }
    o.check(on_board == static_cast<int>(solver().table().range(*pieces().index_of(p.name)).size()), p.name + " poses");
    ++families[static_cast<std::size_t>(p.family)];
    for (const Element& e : p.elements) {
      elbows += e.elbow ? 1 : 0;
      accepting += e.accepts_elbow ? 1 : 0;
    }
  }
  o.check(mirrors == 1, "one mirror piece");
  o.check(families == std::array<int, 3>{3, 5, 4}, "family sizes");
  o.check(elbows == 2, "two elbow balls");
  o.check(accepting == 1, "one elbow-accepting socket");
  o.detail << t.balls << " balls, " << t.sockets << " sockets, " << t.circles << " circles; families " << families[0]
           << "/" << families[1] << "/" << families[2];
  return o;
}

Outcome accounting_partition() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto& tilings = support::tilings(kTilings);
  std::map<std::array<int, 3>, int> seen;
  const auto& parts = builtin_partitions();
  for (const Solution& s : tilings) {
    o.check(verify(board(), pieces(), s), "tiling verifies");
    Occupancy occ(board(), pieces());
    for (const Placement& p : s.placements) occ.place(p);
    auto a = oracle::accounting(occ);
    ++seen[a];
    o.check(std::find(parts.begin(), parts.end(), SpotPartition{a[0], a[1], a[2]}) != parts.end(), "partition");
  }
  std::set<std::vector<Placement>> distinct;
  for (const Solution& s : tilings) distinct.insert(s.placements);
  o.check(tilings.size() >= 100, "corpus size");
  o.detail << tilings.size() << " tilings (" << distinct.size() << " distinct):";
  for (const auto& [a, n] : seen) o.detail << " (" << a[0] << "," << a[1] << "," << a[2] << ")x" << n;
  o.detail << "; " << seconds_since(t0) << " s";
  return o;
}

Outcome pruning_soundness() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto& challenges = small_challenges();
  o.check(challenges.size() >= 50, "50 certified challenges");
  std::vector<SolverConfig> configs;
  auto base = [] { return SolverConfig{}; };
  configs.push_back(base());
  for (int i = 0; i < 4; ++i) {
    SolverConfig c = base();
    if (i == 0) c.use_pairwise = false;
    if (i == 1) c.use_heatsort = false;
    if (i == 2) c.use_budget = false;
    if (i == 3) c.use_linkage = false;
    configs.push_back(c);
  }
  for (int T : {3, 4}) {
    SolverConfig c = base();
    c.transition_level = T;
    configs.push_back(c);
  }
  SolverConfig none = base();
  none.use_pairwise = none.use_heatsort = none.use_budget = none.use_linkage = false;
  configs.push_back(none);

  oracle::BruteForce brute(board(), pieces());
  int brute_checked = 0;
  for (const Challenge& c : challenges) {
    auto want = solution_set(c.puzzle, configs.front());
    o.check(want.size() == 1 && *want.begin() == c.ground_truth.placements, "certified challenge has one solution");
    for (const SolverConfig& cfg : configs) o.check(solution_set(c.puzzle, cfg) == want, "solution set changed");
    if (c.missing() <= 4) {
      o.check(brute.solve(c.puzzle) == want, "brute force disagrees");
      ++brute_checked;
    }
  }
  o.detail << challenges.size() << " challenges x " << configs.size() << " configs, " << brute_checked
           << " also brute forced; " << seconds_since(t0) << " s";
  return o;
}

Outcome linkage_ratio() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto& challenges = wizard_challenges();
  o.check(challenges.size() >= 20, "20 wizard challenges");
  int strict = 0;
  std::size_t samples = 0;
  std::uint64_t root_legal = 0, root_linkable = 0;
  for (const Challenge& c : challenges) {
    auto r = solver().solve(c.puzzle, SolverConfig{});
    for (const LinkRatio& x : r.stats.ratios) o.check(x.linkable <= x.legal, "linkable > legal");
    samples += r.stats.ratios.size();
    if (r.stats.root_ratio) {
      strict += r.stats.root_ratio->linkable < r.stats.root_ratio->legal ? 1 : 0;
      root_legal += r.stats.root_ratio->legal;
      root_linkable += r.stats.root_ratio->linkable;
    }
  }
  double share = challenges.empty() ? 0.0 : static_cast<double>(strict) / static_cast<double>(challenges.size());
  o.check(share >= 0.9, "root strict share");
  o.detail << challenges.size() << " challenges, " << samples << " samples, root strict " << strict << "/"
           << challenges.size() << ", mean root " << root_linkable / std::max<std::size_t>(challenges.size(), 1)
           << " linkable of " << root_legal / std::max<std::size_t>(challenges.size(), 1) << " legal; "
           << seconds_since(t0) << " s";
  return o;
}

// Challenges from the corpus where each missing piece has exactly one legal
// placement left.
Outcome trivial_heat() {
  Outcome o;
  const PlacementTable& table = solver().table();
  int found = 0;
  for (const Solution& s : support::tilings(kTilings)) {
    for (int x = 0; x < 12; ++x)
      for (int y = x; y < 12; ++y) {
        std::vector<int> removed{x};
        if (y != x) removed.push_back(y);
        Puzzle pz = support::without(s, removed);
        PartialAssignment a = support::assignment_of(table, pz.givens);
        CandidateTable c = CandidateTable::from_assignment(table, a);
        bool trivial = true;
        for (int p : removed) trivial &= c.count(p) == 1;
        if (!trivial) continue;
        ++found;
        HeatMap h = heat(c);
        for (std::size_t i = 0; i < h.inside.size(); ++i) {
          o.check(h.inside[i] <= 1 && h.outside[i] <= 1, "heat above 1");
        }
        auto r = singleton_pass(c, a);
        o.check(!r.unsolvable && a.placed_count() == 12, "singleton pass leaves pieces");
        std::vector<Placement> got;
        for (int idx : a.chosen) got.push_back(table.placement(idx));
        std::sort(got.begin(), got.end());
        o.check(got == s.placements, "singleton pass result differs from tiling");
      }
  }
  o.check(found >= 10, "too few trivial challenges");
  o.detail << found << " challenges with one legal placement per missing piece";
  return o;
}

Outcome performance() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const auto& challenges = expert_challenges();
  o.check(challenges.size() >= 50, "50 expert challenges");
  std::vector<double> ms;
  for (const Challenge& c : challenges) {
    auto s0 = std::chrono::steady_clock::now();
    auto r = solver().solve(c.puzzle, SolverConfig{});
    ms.push_back(seconds_since(s0) * 1000.0);
    o.check(r.solutions.size() == 1 && r.solutions[0] == c.ground_truth, "expert challenge solved");
  }
  std::sort(ms.begin(), ms.end());
  double median = ms.empty() ? 0.0 : ms[ms.size() / 2];
  o.check(!ms.empty() && median < 60000.0, "median solve time");
  o.detail << challenges.size() << " challenges, median " << median << " ms, max " << (ms.empty() ? 0.0 : ms.back())
           << " ms; " << seconds_since(t0) << " s with generation";
  return o;
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  pclose(f);
  return out;
}

json without_wall_ms(json j) {
  for (auto& row : j["rows"]) row.erase("wall_ms");
  return j;
}

Outcome format_round_trips(const std::string& cli) {
  Outcome o;
  int puzzles = 0, solutions = 0, verified = 0;
  std::vector<const Challenge*> all;
  for (const auto* set : {&small_challenges(), &expert_challenges(), &wizard_challenges()})
    for (const Challenge& c : *set) all.push_back(&c);
  for (const Challenge* c : all) {
    std::string text = serialize_puzzle(c->puzzle, pieces());
    Puzzle back = parse_puzzle(text, board(), pieces());
    o.check(back == c->puzzle, "puzzle round trip");
    o.check(serialize_puzzle(back, pieces()) == text, "puzzle text round trip");
    ++puzzles;
    auto r = solver().solve(c->puzzle, SolverConfig{});
    for (const Solution& s : r.solutions) {
      o.check(verify(board(), pieces(), s), "verify(solve(p))");
      ++verified;
    }
  }
  for (const Solution& s : support::tilings(kTilings)) {
    std::string text = serialize_solution(s, pieces());
    Solution back = parse_solution(text, board(), pieces());
    o.check(back == s, "solution round trip");
    o.check(serialize_solution(back, pieces()) == text, "solution text round trip");
    ++solutions;
  }
  o.check(puzzles >= 100 && solutions >= 100, "100 round trips");

  std::string cmd = cli + " bench --generate 3 --seed 11 --format json 2>/dev/null";
  std::string a = run(cmd), b = run(cmd);
  bool same = false;
  try {
    same = without_wall_ms(json::parse(a)) == without_wall_ms(json::parse(b)) && json::parse(a)["rows"].size() == 3;
  } catch (const std::exception&) {
    same = false;
  }
  o.check(same, "bench reports differ");
  o.detail << puzzles << " puzzles, " << solutions << " solutions, " << verified << " solved and verified, bench "
           << (same ? "deterministic" : "nondeterministic");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "hexlink";
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"placement counts", placement_counts},
      {"board geometry", board_geometry},
      {"transform orbit", transform_orbit},
      {"piece structure", piece_structure},
      {"accounting partition", accounting_partition},
      {"pruning soundness", pruning_soundness},
      {"linkage ratio", linkage_ratio},
      {"trivial heat", trivial_heat},
      {"desk-scale performance", performance},
      {"format round trips", [&] { return format_round_trips(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].name << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
