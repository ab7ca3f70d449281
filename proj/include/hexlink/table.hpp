#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "hexlink/model.hpp"
#include "hexlink/placement.hpp"

namespace hexlink {

// Fixed-width bitset over placement indices.
class PlacementSet {
 public:
  PlacementSet() = default;
  explicit PlacementSet(int bits) : words_(static_cast<std::size_t>((bits + 63) / 64), 0) {}

  int word_count() const { return static_cast<int>(words_.size()); }
  std::uint64_t word(int w) const { return words_[static_cast<std::size_t>(w)]; }
  std::uint64_t& word(int w) { return words_[static_cast<std::size_t>(w)]; }

  bool test(int i) const { return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u; }
  void set(int i) { words_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[static_cast<std::size_t>(i >> 6)] &= ~(std::uint64_t{1} << (i & 63)); }

  int count() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  PlacementSet& operator&=(const PlacementSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  PlacementSet& operator|=(const PlacementSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(static_cast<int>(w * 64) + b);
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const PlacementSet&, const PlacementSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

using SpotMask = std::uint64_t;

constexpr SpotMask spot_bit(SpotId s) { return SpotMask{1} << s; }

struct TableEntry {
  Placement placement;
  ResolvedPlacement elements{};
  SpotMask spots = 0;        // every spot touched
  SpotMask inside_half = 0;  // balls and circles
  SpotMask outside_half = 0; // rings and circles
  SpotMask balls = 0;
  SpotMask rings = 0;
};

// Every on-board placement of every piece, with precomputed pairwise
// compatibility and mating rows. Each piece's placements start on a fresh
// 64-bit word so per-piece scans never need masking.
class PlacementTable {
 public:
  struct Range {
    int begin = 0;
    int end = 0;  // one past the last placement
    int first_word = 0;
    int last_word = 0;  // one past
    int size() const { return end - begin; }
  };

  PlacementTable(BoardMap board, PieceSet pieces) : board_(std::move(board)), pieces_(std::move(pieces)) {
    if (board_.size() > kMaxSpots) throw ValidationError("board too large for the placement table");
    int next = 0;
    for (int piece = 0; piece < pieces_.size(); ++piece) {
      Range r;
      r.begin = next;
      r.first_word = next / 64;
      for (SpotId anchor = 0; anchor < board_.size(); ++anchor)
        for (Orientation o : orientations_for(pieces_[piece])) {
          Placement p{piece, anchor, o};
          auto elems = resolve(board_, pieces_, p);
          if (!elems) continue;
          TableEntry e;
          e.placement = p;
          e.elements = *elems;
          for (const ElementAt& x : *elems) {
            e.spots |= spot_bit(x.spot);
            switch (x.kind) {
              case Element::Kind::ball:
                e.inside_half |= spot_bit(x.spot);
                e.balls |= spot_bit(x.spot);
                break;
              case Element::Kind::socket:
                e.outside_half |= spot_bit(x.spot);
                e.rings |= spot_bit(x.spot);
                break;
              case Element::Kind::circle:
                e.inside_half |= spot_bit(x.spot);
                e.outside_half |= spot_bit(x.spot);
                break;
            }
          }
          entries_.resize(static_cast<std::size_t>(next + 1));
          entries_[static_cast<std::size_t>(next)] = e;
          piece_of_.resize(static_cast<std::size_t>(next + 1), -1);
          piece_of_[static_cast<std::size_t>(next)] = piece;
          ++next;
        }
      r.end = next;
      next = (next + 63) / 64 * 64;
      r.last_word = next / 64;
      ranges_.push_back(r);
    }
    bits_ = next;
    entries_.resize(static_cast<std::size_t>(bits_));
    piece_of_.resize(static_cast<std::size_t>(bits_), -1);
    build_rows();
  }

  const BoardMap& board() const { return board_; }
  const PieceSet& pieces() const { return pieces_; }

  // Width of index space, including padding.
  int bits() const { return bits_; }
  int placement_count() const {
    int n = 0;
    for (const auto& r : ranges_) n += r.size();
    return n;
  }
  const Range& range(int piece) const { return ranges_.at(static_cast<std::size_t>(piece)); }
  bool valid(int i) const { return i >= 0 && i < bits_ && piece_of_[static_cast<std::size_t>(i)] >= 0; }
  int piece_of(int i) const { return piece_of_[static_cast<std::size_t>(i)]; }
  const TableEntry& entry(int i) const { return entries_.at(static_cast<std::size_t>(i)); }
  const Placement& placement(int i) const { return entry(i).placement; }

  const PlacementSet& compatible_with(int i) const { return compat_[static_cast<std::size_t>(i)]; }
  const PlacementSet& mates_with(int i) const { return mates_[static_cast<std::size_t>(i)]; }

  std::optional<int> index_of(const Placement& p) const {
    if (p.piece < 0 || p.piece >= pieces_.size()) return std::nullopt;
    auto canon = canonicalize(board_, pieces_, p);
    if (!canon) return std::nullopt;
    const Range& r = range(p.piece);
    for (int i = r.begin; i < r.end; ++i)
      if (entries_[static_cast<std::size_t>(i)].placement == *canon) return i;
    return std::nullopt;
  }

  PlacementSet all_of(int piece) const {
    PlacementSet s(bits_);
    const Range& r = range(piece);
    for (int i = r.begin; i < r.end; ++i) s.set(i);
    return s;
  }

 private:
  void build_rows() {
    compat_.assign(static_cast<std::size_t>(bits_), PlacementSet(bits_));
    mates_.assign(static_cast<std::size_t>(bits_), PlacementSet(bits_));
    for (int i = 0; i < bits_; ++i) {
      if (!valid(i)) continue;
      const TableEntry& a = entry(i);
      Occupancy occ(board_, pieces_);
      occ.place(a.placement);
      for (int j = 0; j < bits_; ++j) {
        if (!valid(j) || piece_of(j) == piece_of(i)) continue;
        const TableEntry& b = entry(j);
        if ((a.spots & b.spots) == 0) {
          compat_[static_cast<std::size_t>(i)].set(j);
          continue;
        }
        if (!occ.compatible(b.elements)) continue;
        compat_[static_cast<std::size_t>(i)].set(j);
        // compatible + a ball in the other's ring on a shared spot
        if ((a.balls & b.rings) || (a.rings & b.balls)) mates_[static_cast<std::size_t>(i)].set(j);
      }
    }
  }

  BoardMap board_;
  PieceSet pieces_;
  std::vector<TableEntry> entries_;
  std::vector<int> piece_of_;
  std::vector<Range> ranges_;
  std::vector<PlacementSet> compat_;
  std::vector<PlacementSet> mates_;
  int bits_ = 0;
};

}  // namespace hexlink
