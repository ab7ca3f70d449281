#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hexlink/error.hpp"
#include "hexlink/solver.hpp"

namespace hexlink {

inline constexpr std::string_view kPuzzleHeader = "# hexlink puzzle v1";

// Puzzle and solution files share one grammar: the header line, then one
// placement per line, sorted by piece index when written.
inline std::vector<Placement> parse_placements(std::string_view text, const BoardMap& b, const PieceSet& ps) {
  std::string_view first = text.substr(0, text.find('\n'));
  if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
  if (first != kPuzzleHeader) throw ParseError(1, 1, "expected header '" + std::string(kPuzzleHeader) + "'");

  std::vector<Placement> out;
  Occupancy occ(b, ps);
  for (const auto& line : detail::tokenize(text)) {
    Placement p = parse_placement(ps, b, line);
    if (occ.has_piece(p.piece)) throw InvalidPuzzle("piece '" + ps[p.piece].name + "' appears twice");
    if (!resolve(b, ps, p)) throw InvalidPuzzle("'" + format_placement(ps, p) + "' leaves the board");
    if (!occ.compatible(p)) throw InvalidPuzzle("'" + format_placement(ps, p) + "' collides with an earlier line");
    occ.place(p);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string serialize_placements(std::vector<Placement> ps_list, const PieceSet& ps) {
  std::sort(ps_list.begin(), ps_list.end());
  std::string out(kPuzzleHeader);
  out += '\n';
  for (const Placement& p : ps_list) out += format_placement(ps, p) + '\n';
  return out;
}

inline Puzzle parse_puzzle(std::string_view text, const BoardMap& b, const PieceSet& ps) {
  return Puzzle{parse_placements(text, b, ps)};
}

inline std::string serialize_puzzle(const Puzzle& p, const PieceSet& ps) { return serialize_placements(p.givens, ps); }

inline Solution parse_solution(std::string_view text, const BoardMap& b, const PieceSet& ps) {
  Solution s{parse_placements(text, b, ps)};
  if (static_cast<int>(s.placements.size()) != ps.size())
    throw InvalidPuzzle("solution has " + std::to_string(s.placements.size()) + " placements, expected " +
                        std::to_string(ps.size()));
  return s;
}

inline std::string serialize_solution(const Solution& s, const PieceSet& ps) {
  return serialize_placements(s.placements, ps);
}

enum class Level { starter, junior, expert, master, wizard };

inline constexpr std::array<Level, 5> kLevels{Level::starter, Level::junior, Level::expert, Level::master,
                                              Level::wizard};

inline std::string_view to_string(Level l) {
  switch (l) {
    case Level::starter: return "Starter";
    case Level::junior: return "Junior";
    case Level::expert: return "Expert";
    case Level::master: return "Master";
    case Level::wizard: return "Wizard";
  }
  return "?";
}

inline std::optional<Level> level_from_string(std::string_view s) {
  for (Level l : kLevels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

struct MissingRange {
  int lo;
  int hi;
  bool contains(int k) const { return k >= lo && k <= hi; }
};

// Pieces-to-place range per level.
inline constexpr MissingRange missing_range(Level l) {
  switch (l) {
    case Level::starter: return {2, 3};
    case Level::junior: return {3, 7};
    case Level::expert: return {5, 8};
    case Level::master: return {6, 9};
    case Level::wizard: return {8, 10};
  }
  return {0, -1};
}

// Node-count ceilings for Starter..Master; Wizard is unbounded. A challenge
// gets the lowest level whose range admits its missing count and whose
// ceiling is at least its node count; the highest eligible level otherwise.
struct GradeThresholds {
  std::array<std::uint64_t, 4> ceiling;
};

// Medians of nodes_expanded with the default config over the generated
// calibration corpus (`hexlink calibrate --seed 1 --generate 40`).
inline constexpr GradeThresholds kDefaultThresholds{{1, 2, 8, 27}};

class Ungradeable : public Error {
 public:
  using Error::Error;
};

inline Level grade(int missing, std::uint64_t nodes, const GradeThresholds& t = kDefaultThresholds) {
  if (missing < 2 || missing > 10) throw Ungradeable("cannot grade a challenge with " + std::to_string(missing) + " missing pieces");
  std::optional<Level> highest;
  for (Level l : kLevels) {
    if (!missing_range(l).contains(missing)) continue;
    highest = l;
    auto i = static_cast<std::size_t>(l);
    if (l == Level::wizard || nodes <= t.ceiling[i]) return l;
  }
  return *highest;
}

struct Challenge {
  Puzzle puzzle;
  std::optional<Level> level;  // empty when the missing count is outside 2..10
  bool certified_unique = false;
  Solution ground_truth;
  SearchStats stats;  // default-config solve of the puzzle

  int missing() const { return kPieceCount - static_cast<int>(puzzle.givens.size()); }
};

// Seed for job `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

// A complete tiling found by seed-shuffled search. Each attempt pins one
// random placement of a random piece first, which spreads the results over
// far more of the tiling space than searching from the empty board.
inline Solution generate_full(const Solver& solver, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.shuffle = true;
  cfg.use_heatsort = false;
  cfg.uniqueness_assumed = false;
  cfg.max_ratio_samples = 0;
  // tilings are rare and search effort is heavy tailed, so short runs with
  // fresh shuffles beat one long run
  cfg.node_limit = 30000;
  const PlacementTable& tab = solver.table();
  for (std::uint64_t attempt = 0; attempt < 1024; ++attempt) {
    cfg.seed = derive_seed(seed, attempt);
    std::mt19937_64 rng(cfg.seed);
    int piece = std::uniform_int_distribution<int>(0, solver.pieces().size() - 1)(rng);
    std::vector<int> poses;
    for (int i = tab.range(piece).begin; i < tab.range(piece).end; ++i)
      if (tab.valid(i)) poses.push_back(i);
    if (poses.empty()) break;
    int idx = poses[std::uniform_int_distribution<std::size_t>(0, poses.size() - 1)(rng)];
    auto r = solver.solve(Puzzle{{tab.placement(idx)}}, cfg);
    if (!r.solutions.empty()) return r.solutions.front();
  }
  throw Error("no complete tiling found; the piece or board data admit no solution");
}

struct ChallengeOptions {
  int retries = 64;
  GradeThresholds thresholds = kDefaultThresholds;
};

// Removes a random k-subset of pieces from `s` and certifies that the rest
// has exactly one completion. Tries up to opt.retries distinct subsets.
template <class Rng>
std::optional<Challenge> make_challenge(const Solver& solver, const Solution& s, int k, Rng& rng,
                                        const ChallengeOptions& opt = {}) {
  int n = static_cast<int>(s.placements.size());
  if (k < 1 || k > n) throw Error("cannot remove " + std::to_string(k) + " of " + std::to_string(n) + " pieces");
  std::set<std::vector<int>> tried;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < opt.retries; ++attempt) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> removed(order.begin(), order.begin() + k);
    std::sort(removed.begin(), removed.end());
    if (!tried.insert(removed).second) continue;
    Puzzle p;
    for (int i = 0; i < n; ++i)
      if (!std::binary_search(removed.begin(), removed.end(), i)) p.givens.push_back(s.placements[static_cast<std::size_t>(i)]);
    if (count_solutions(solver, p, 2) != 1) continue;

    Challenge c;
    c.puzzle = std::move(p);
    c.certified_unique = true;
    c.ground_truth = s;
    c.stats = solver.solve(c.puzzle, SolverConfig{}).stats;
    if (k >= 2 && k <= 10) c.level = grade(k, c.stats.nodes_expanded, opt.thresholds);
    return c;
  }
  return std::nullopt;
}

inline Level grade(const Challenge& c, const GradeThresholds& t = kDefaultThresholds) {
  return grade(c.missing(), c.stats.nodes_expanded, t);
}

struct GenerateSpec {
  int min_missing = 5;
  int max_missing = 8;
  std::optional<Level> level;  // when set, only challenges graded at this level are kept
  int max_attempts = 200;
  ChallengeOptions challenge;
};

// Job `job` of a generation run: fresh tilings and missing counts drawn from
// the job's own stream until a certified challenge meets the spec.
inline Challenge generate_challenge(const Solver& solver, std::uint64_t seed, std::uint64_t job,
                                    const GenerateSpec& spec) {
  if (spec.min_missing < 1 || spec.max_missing > kPieceCount || spec.min_missing > spec.max_missing)
    throw Error("bad missing-piece range");
  std::mt19937_64 rng(derive_seed(seed, job));
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Solution tiling = generate_full(solver, rng());
    int k = std::uniform_int_distribution<int>(spec.min_missing, spec.max_missing)(rng);
    auto c = make_challenge(solver, tiling, k, rng, spec.challenge);
    if (!c) continue;
    if (spec.level && c->level != spec.level) continue;
    return *c;
  }
  throw Error("no challenge met the generation spec within " + std::to_string(spec.max_attempts) + " attempts");
}

// Ceilings from a corpus of (missing, nodes) samples: the median node count
// at 3, 5, 7 and 8 missing pieces bounds Starter, Junior, Expert and Master.
inline GradeThresholds calibrate_thresholds(const std::vector<std::pair<int, std::uint64_t>>& samples) {
  auto median_at = [&](int k) {
    std::vector<std::uint64_t> v;
    for (const auto& [m, nodes] : samples)
      if (m == k) v.push_back(nodes);
    if (v.empty()) throw Error("calibration corpus has no sample with " + std::to_string(k) + " missing");
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  GradeThresholds t{{median_at(3), median_at(5), median_at(7), median_at(8)}};
  for (std::size_t i = 1; i < t.ceiling.size(); ++i) t.ceiling[i] = std::max(t.ceiling[i], t.ceiling[i - 1]);
  return t;
}

}  // namespace hexlink
