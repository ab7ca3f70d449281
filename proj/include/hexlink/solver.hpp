#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "hexlink/error.hpp"
#include "hexlink/placement.hpp"
#include "hexlink/pruning.hpp"
#include "hexlink/table.hpp"

namespace hexlink {

struct SolverConfig {
  // Remaining-piece count at or below which the linkage filter is dropped.
  int transition_level = 3;
  bool use_linkage = true;
  bool use_heatsort = true;
  bool use_pairwise = true;
  bool use_budget = true;
  // Enables the twin-pose filter and the socket-must-mate obligation.
  bool uniqueness_assumed = true;
  // Experimental: apply the twin rule to every straight piece.
  bool twin_rule_all_straight = false;
  PriorityRule priority_rule = PriorityRule::min_heat;
  std::size_t solution_limit = 1;
  std::uint64_t seed = 0;
  // Break ties in branch order randomly (from seed) instead of by index.
  bool shuffle = false;
  std::size_t max_ratio_samples = 100000;
  // 0 = unlimited. Search stops early and flags stats.truncated.
  std::uint64_t node_limit = 0;
};

struct Puzzle {
  std::vector<Placement> givens;
  friend bool operator==(const Puzzle&, const Puzzle&) = default;
};

struct Solution {
  std::vector<Placement> placements;  // sorted by piece
  friend bool operator==(const Solution&, const Solution&) = default;
  friend auto operator<=>(const Solution&, const Solution&) = default;
};

struct LinkRatio {
  int linkable = 0;
  int legal = 0;
  friend bool operator==(const LinkRatio&, const LinkRatio&) = default;
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t leaves = 0;
  // Leaves visited up to and including the first solution; 0 if none.
  std::uint64_t first_solution_index = 0;
  std::vector<LinkRatio> ratios;
  std::optional<LinkRatio> root_ratio;
  bool truncated = false;
  double wall_ms = 0.0;
};

struct SolveResult {
  std::vector<Solution> solutions;
  SearchStats stats;
};

// Owns the placement table for one board and piece set; solve() is const and
// may be called from several threads at once.
class Solver {
 public:
  Solver(BoardMap board, PieceSet pieces)
      : table_(std::make_shared<const PlacementTable>(std::move(board), std::move(pieces))),
        partitions_(spot_partitions(table_->board().size(), table_->pieces().totals())) {}

  const PlacementTable& table() const { return *table_; }
  const BoardMap& board() const { return table_->board(); }
  const PieceSet& pieces() const { return table_->pieces(); }

  SolveResult solve(const Puzzle& puzzle, const SolverConfig& cfg) const {
    auto start = std::chrono::steady_clock::now();
    Search s(*this, cfg);
    s.run(puzzle);
    s.result.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return std::move(s.result);
  }

 private:
  struct Search {
    const Solver& solver;
    const PlacementTable& tab;
    const SolverConfig& cfg;
    SolveResult result;
    std::mt19937_64 rng;
    std::vector<int> rank;             // tie-break key per table index
    std::vector<bool> must_mate;       // per piece, socket obligation active
    bool done = false;

    Search(const Solver& s, const SolverConfig& c)
        : solver(s), tab(*s.table_), cfg(c), rng(c.seed), rank(static_cast<std::size_t>(tab.bits())) {
      std::iota(rank.begin(), rank.end(), 0);
      if (cfg.shuffle) std::shuffle(rank.begin(), rank.end(), rng);
    }

    void run(const Puzzle& puzzle) {
      const PieceSet& ps = tab.pieces();
      Occupancy occ(tab.board(), ps);
      PartialAssignment given(ps.size());
      for (const Placement& p : puzzle.givens) {
        if (p.piece < 0 || p.piece >= ps.size()) throw InvalidPuzzle("given references an unknown piece");
        if (occ.has_piece(p.piece)) throw InvalidPuzzle("piece '" + ps[p.piece].name + "' is given twice");
        auto idx = tab.index_of(p);
        if (!idx) throw InvalidPuzzle("given '" + format_placement(ps, p) + "' leaves the board");
        if (!occ.compatible(tab.placement(*idx)))
          throw InvalidPuzzle("given '" + format_placement(ps, p) + "' collides with another given");
        occ.place(tab.placement(*idx));
        given.add(tab, *idx);
      }

      CandidateTable cands = CandidateTable::from_assignment(tab, given);
      UselessFilterOptions opt{cfg.uniqueness_assumed, cfg.twin_rule_all_straight};
      must_mate.assign(static_cast<std::size_t>(ps.size()), false);
      for (int piece = 0; piece < ps.size(); ++piece) {
        if (!cands.is_remaining(piece) || !twin_rule_applies(ps[piece], opt)) continue;
        must_mate[static_cast<std::size_t>(piece)] = true;
        for (int idx : cands.candidates(piece))
          if (!classify_useless(tab.board(), ps, tab.placement(idx), opt)) cands.remove(idx);
      }
      visit(std::move(cands), std::move(given), true);
    }

    void leaf() {
      ++result.stats.leaves;
    }

    bool obligations_met(const PartialAssignment& a, const HeatMap* h) const {
      for (std::size_t piece = 0; piece < must_mate.size(); ++piece) {
        if (!must_mate[piece] || a.chosen[piece] < 0) continue;
        SpotMask rings = tab.entry(a.chosen[piece]).rings;
        if (rings & a.balls) continue;
        if (!h) return false;
        // still open if some ring spot has a free, reachable inside
        bool open = false;
        for (SpotMask m = rings; m; m &= m - 1) {
          int s = std::countr_zero(m);
          if (!(a.inside_used & spot_bit(s)) && h->inside[static_cast<std::size_t>(s)] > 0) open = true;
        }
        if (!open) return false;
      }
      return true;
    }

    bool connected(const PartialAssignment& a) const {
      std::vector<int> placed;
      for (int idx : a.chosen)
        if (idx >= 0) placed.push_back(idx);
      if (placed.empty()) return true;
      std::vector<bool> seen(placed.size(), false);
      std::vector<std::size_t> stack{0};
      seen[0] = true;
      std::size_t reached = 1;
      while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        const PlacementSet& row = tab.mates_with(placed[i]);
        for (std::size_t j = 0; j < placed.size(); ++j)
          if (!seen[j] && row.test(placed[j])) {
            seen[j] = true;
            ++reached;
            stack.push_back(j);
          }
      }
      return reached == placed.size();
    }

    void emit(const PartialAssignment& a) {
      Solution sol;
      for (int idx : a.chosen) sol.placements.push_back(tab.placement(idx));
      result.solutions.push_back(std::move(sol));
      if (result.stats.first_solution_index == 0) result.stats.first_solution_index = result.stats.leaves;
      if (result.solutions.size() >= cfg.solution_limit) done = true;
    }

    void visit(CandidateTable cands, PartialAssignment a, bool root) {
      if (done) return;
      if (cfg.node_limit && result.stats.nodes_expanded >= cfg.node_limit) {
        result.stats.truncated = true;
        done = true;
        return;
      }
      ++result.stats.nodes_expanded;

      // propagation: singletons, then pairwise support, until both are quiet
      for (;;) {
        if (singleton_pass(cands, a).unsolvable) return leaf();
        if (!cfg.use_pairwise || cands.remaining() == 0) break;
        if (pairwise_pass(cands) == 0) break;
      }

      if (cands.remaining() == 0) {
        leaf();
        if (connected(a) && obligations_met(a, nullptr)) emit(a);
        return;
      }

      HeatMap h = heat(cands);
      if (!obligations_met(a, &h)) return leaf();
      if (cfg.use_budget && !budget_check(compute_budget(a, h), solver.partitions_)) return leaf();

      // per-piece candidate counts drive piece selection
      std::vector<int> counts(static_cast<std::size_t>(tab.pieces().size()), 0);
      for (PieceMask m = cands.remaining(); m; m &= m - 1) {
        int piece = std::countr_zero(m);
        counts[static_cast<std::size_t>(piece)] = cands.count(piece);
      }

      std::vector<int> branch;
      bool linkage_mode = cfg.use_linkage && cands.remaining_count() > cfg.transition_level && !a.empty();
      if (linkage_mode) {
        PlacementSet linked(tab.bits());
        for (int idx : a.chosen)
          if (idx >= 0) linked |= tab.mates_with(idx);
        linked &= cands.live();
        linked.for_each([&](int idx) { branch.push_back(idx); });
        LinkRatio r{static_cast<int>(branch.size()), cands.total()};
        if (root) result.stats.root_ratio = r;
        if (result.stats.ratios.size() < cfg.max_ratio_samples) result.stats.ratios.push_back(r);
      } else {
        int best = -1;
        for (PieceMask m = cands.remaining(); m; m &= m - 1) {
          int piece = std::countr_zero(m);
          if (best < 0 || counts[static_cast<std::size_t>(piece)] < counts[static_cast<std::size_t>(best)]) best = piece;
        }
        branch = cands.candidates(best);
        if (root && !a.empty()) result.stats.root_ratio = LinkRatio{cands.total(), cands.total()};
      }
      if (branch.empty()) return leaf();

      struct Key {
        int count;
        int prio;
        int rank;
        int idx;
      };
      std::vector<Key> keys;
      keys.reserve(branch.size());
      for (int idx : branch)
        keys.push_back({counts[static_cast<std::size_t>(tab.piece_of(idx))],
                        cfg.use_heatsort ? priority(tab, idx, h, cfg.priority_rule) : 0,
                        rank[static_cast<std::size_t>(idx)], idx});
      std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
        return std::tie(x.count, x.prio, x.rank) < std::tie(y.count, y.prio, y.rank);
      });

      for (const Key& k : keys) {
        // explored siblings are excluded from later branches, so every
        // solution is reached exactly once
        CandidateTable child = cands;
        PartialAssignment ca = a;
        child.commit(k.idx);
        ca.add(tab, k.idx);
        visit(std::move(child), std::move(ca), false);
        if (done) return;
        cands.remove(k.idx);
        if (cands.count(tab.piece_of(k.idx)) == 0) return;
      }
    }
  };

  std::shared_ptr<const PlacementTable> table_;
  std::vector<SpotPartition> partitions_;
};

// Exact count up to `limit`, with uniqueness-based filters off.
inline std::size_t count_solutions(const Solver& solver, const Puzzle& puzzle, std::size_t limit,
                                   SolverConfig cfg = {}) {
  cfg.uniqueness_assumed = false;
  cfg.solution_limit = limit;
  return solver.solve(puzzle, cfg).solutions.size();
}

// Twelve distinct pieces, each on the board, pairwise compatible, and linked
// into one connected graph.
inline bool verify(const BoardMap& b, const PieceSet& ps, const Solution& s) {
  if (static_cast<int>(s.placements.size()) != ps.size()) return false;
  Occupancy occ(b, ps);
  for (const Placement& p : s.placements) {
    if (p.piece < 0 || p.piece >= ps.size() || p.anchor < 0 || p.anchor >= b.size()) return false;
    if (!occ.compatible(p)) return false;
    occ.place(p);
  }
  return link_components(occ) == 1;
}

}  // namespace hexlink
