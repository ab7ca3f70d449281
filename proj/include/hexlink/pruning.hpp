#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <vector>

#include "hexlink/table.hpp"

namespace hexlink {

// Placed pieces in table form: the search-side mirror of Occupancy.
struct PartialAssignment {
  std::vector<int> chosen;  // table index per piece, -1 when unplaced
  SpotMask inside_used = 0;
  SpotMask outside_used = 0;
  SpotMask balls = 0;
  SpotMask rings = 0;

  PartialAssignment() = default;
  explicit PartialAssignment(int piece_count) : chosen(static_cast<std::size_t>(piece_count), -1) {}

  bool empty() const {
    return std::all_of(chosen.begin(), chosen.end(), [](int c) { return c < 0; });
  }
  int placed_count() const {
    return static_cast<int>(std::count_if(chosen.begin(), chosen.end(), [](int c) { return c >= 0; }));
  }

  void add(const PlacementTable& t, int idx) {
    const TableEntry& e = t.entry(idx);
    chosen[static_cast<std::size_t>(t.piece_of(idx))] = idx;
    inside_used |= e.inside_half;
    outside_used |= e.outside_half;
    balls |= e.balls;
    rings |= e.rings;
  }
};

// Surviving candidate placements for each remaining piece. Every survivor is
// individually compatible with the placed pieces.
class CandidateTable {
 public:
  CandidateTable() = default;
  explicit CandidateTable(const PlacementTable& t) : table_(&t), live_(t.bits()) {}

  // Every placement of every piece not yet placed, filtered by compatibility.
  static CandidateTable from_assignment(const PlacementTable& t, const PartialAssignment& a) {
    CandidateTable c(t);
    for (int piece = 0; piece < t.pieces().size(); ++piece) {
      if (a.chosen[static_cast<std::size_t>(piece)] >= 0) continue;
      c.remaining_ |= PieceMask{1} << piece;
      c.live_ |= t.all_of(piece);
    }
    for (int idx : a.chosen)
      if (idx >= 0) c.live_ &= t.compatible_with(idx);
    return c;
  }

  const PlacementTable& table() const { return *table_; }
  const PlacementSet& live() const { return live_; }
  PieceMask remaining() const { return remaining_; }
  int remaining_count() const { return std::popcount(remaining_); }
  bool is_remaining(int piece) const { return (remaining_ >> piece) & 1u; }

  bool contains(int idx) const { return live_.test(idx); }
  void remove(int idx) { live_.reset(idx); }

  int count(int piece) const {
    const auto& r = table_->range(piece);
    int n = 0;
    for (int w = r.first_word; w < r.last_word; ++w) n += std::popcount(live_.word(w));
    return n;
  }
  int total() const { return live_.count(); }

  std::vector<int> candidates(int piece) const {
    std::vector<int> out;
    const auto& r = table_->range(piece);
    for (int w = r.first_word; w < r.last_word; ++w) {
      std::uint64_t bits = live_.word(w);
      while (bits) {
        out.push_back(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
    return out;
  }

  // Commits idx: its piece leaves the table and every survivor must be
  // compatible with it.
  void commit(int idx) {
    remaining_ &= ~(PieceMask{1} << table_->piece_of(idx));
    live_ &= table_->compatible_with(idx);
  }

  // True iff every other remaining piece has a candidate compatible with idx.
  bool supported(int idx) const {
    const PlacementSet& row = table_->compatible_with(idx);
    int own = table_->piece_of(idx);
    for (PieceMask m = remaining_; m; m &= m - 1) {
      int piece = std::countr_zero(m);
      if (piece == own) continue;
      const auto& r = table_->range(piece);
      bool any = false;
      for (int w = r.first_word; w < r.last_word && !any; ++w) any = (row.word(w) & live_.word(w)) != 0;
      if (!any) return false;
    }
    return true;
  }

  // Restricts every remaining piece to its candidates in `keep`.
  void restrict_to(const PlacementSet& keep) { live_ &= keep; }

 private:
  const PlacementTable* table_ = nullptr;
  PlacementSet live_;
  PieceMask remaining_ = 0;
};

struct SingletonResult {
  std::vector<int> committed;
  bool unsolvable = false;
};

// Commits every piece that has exactly one candidate, repeating until no
// such piece remains. Stops with unsolvable as soon as a piece has none.
inline SingletonResult singleton_pass(CandidateTable& t, PartialAssignment& a) {
  SingletonResult res;
  bool changed = true;
  while (changed) {
    changed = false;
    for (PieceMask m = t.remaining(); m; m &= m - 1) {
      int piece = std::countr_zero(m);
      int n = t.count(piece);
      if (n == 0) {
        res.unsolvable = true;
        return res;
      }
      if (n == 1) {
        int idx = t.candidates(piece).front();
        t.commit(idx);
        a.add(t.table(), idx);
        res.committed.push_back(idx);
        changed = true;
        break;
      }
    }
  }
  return res;
}

// Removes candidates that have no compatible partner in some other remaining
// piece, to fixpoint. Returns the number removed.
inline int pairwise_pass(CandidateTable& t) {
  int removed = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (PieceMask m = t.remaining(); m; m &= m - 1) {
      int piece = std::countr_zero(m);
      for (int idx : t.candidates(piece)) {
        if (!t.supported(idx)) {
          t.remove(idx);
          ++removed;
          changed = true;
        }
      }
    }
  }
  return removed;
}

// Coverage count per spot half over all surviving candidates.
struct HeatMap {
  std::vector<int> inside;
  std::vector<int> outside;

  explicit HeatMap(int spots = 0)
      : inside(static_cast<std::size_t>(spots), 0), outside(static_cast<std::size_t>(spots), 0) {}

  bool all_zero() const {
    return std::all_of(inside.begin(), inside.end(), [](int h) { return h == 0; }) &&
           std::all_of(outside.begin(), outside.end(), [](int h) { return h == 0; });
  }
};

inline HeatMap heat(const CandidateTable& t) {
  const PlacementTable& tab = t.table();
  HeatMap h(tab.board().size());
  t.live().for_each([&](int idx) {
    for (const ElementAt& e : tab.entry(idx).elements) {
      auto s = static_cast<std::size_t>(e.spot);
      if (e.kind != Element::Kind::socket) ++h.inside[s];
      if (e.kind != Element::Kind::ball) ++h.outside[s];
    }
  });
  return h;
}

enum class PriorityRule { min_heat, sum_heat };

// Lower is scarcer, and scarcer placements are tried first.
inline int priority(const PlacementTable& tab, int idx, const HeatMap& h, PriorityRule rule = PriorityRule::min_heat) {
  int best = rule == PriorityRule::min_heat ? std::numeric_limits<int>::max() : 0;
  auto take = [&](int v) { best = rule == PriorityRule::min_heat ? std::min(best, v) : best + v; };
  for (const ElementAt& e : tab.entry(idx).elements) {
    auto s = static_cast<std::size_t>(e.spot);
    if (e.kind != Element::Kind::socket) take(h.inside[s]);
    if (e.kind != Element::Kind::ball) take(h.outside[s]);
  }
  return best;
}

// Spot halves that are free now and that no surviving candidate can fill.
struct BudgetState {
  int dead_empty = 0;
  int dead_balls = 0;
  int dead_sockets = 0;
};

inline BudgetState compute_budget(const PartialAssignment& a, const HeatMap& h) {
  BudgetState b;
  for (std::size_t s = 0; s < h.inside.size(); ++s) {
    SpotMask bit = spot_bit(static_cast<SpotId>(s));
    bool in_free = !(a.inside_used & bit), out_free = !(a.outside_used & bit);
    bool in_cold = h.inside[s] == 0, out_cold = h.outside[s] == 0;
    if (in_free && out_free && in_cold && out_cold) ++b.dead_empty;
    if ((a.balls & bit) && out_free && out_cold) ++b.dead_balls;
    if ((a.rings & bit) && in_free && in_cold) ++b.dead_sockets;
  }
  return b;
}

// One way a complete solution can use the board: how many balls and sockets
// stay unmatched and how many spots stay empty.
struct SpotPartition {
  int unmatched_balls = 0;
  int unmatched_sockets = 0;
  int empty_spots = 0;
  friend bool operator==(const SpotPartition&, const SpotPartition&) = default;
};

// With m mated pairs: balls - m unmatched balls, sockets - m unmatched
// sockets, and the rest of the non-circle spots empty.
inline std::vector<SpotPartition> spot_partitions(int spots, const ElementTotals& t) {
  std::vector<SpotPartition> out;
  int open_spots = spots - t.circles;
  for (int m = std::min(t.balls, t.sockets); m >= 0; --m) {
    SpotPartition p{t.balls - m, t.sockets - m, open_spots - (t.balls - m) - (t.sockets - m) - m};
    if (p.empty_spots >= 0) out.push_back(p);
  }
  return out;
}

inline const std::vector<SpotPartition>& builtin_partitions() {
  static const std::vector<SpotPartition> parts = spot_partitions(24, ElementTotals{16, 14, 6});
  return parts;
}

// Feasible iff some partition leaves room for every dead half already seen.
inline bool budget_check(const BudgetState& b, const std::vector<SpotPartition>& parts) {
  return std::any_of(parts.begin(), parts.end(), [&](const SpotPartition& p) {
    return b.dead_balls <= p.unmatched_balls && b.dead_sockets <= p.unmatched_sockets &&
           b.dead_empty <= p.empty_spots;
  });
}

inline bool budget_check(const BudgetState& b) { return budget_check(b, builtin_partitions()); }

}  // namespace hexlink
