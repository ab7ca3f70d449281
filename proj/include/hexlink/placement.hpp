#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hexlink/detail/text.hpp"
#include "hexlink/error.hpp"
#include "hexlink/hexmath.hpp"
#include "hexlink/model.hpp"

namespace hexlink {

// The atomic search move: which piece, where its anchor element sits, and how
// it is turned.
struct Placement {
  int piece = 0;
  SpotId anchor = 0;
  Orientation orient{};

  friend constexpr auto operator<=>(const Placement&, const Placement&) = default;
};

// One element of a resolved placement, in the board frame.
struct ElementAt {
  SpotId spot = 0;
  Element::Kind kind = Element::Kind::ball;
  bool elbow = false;
  bool accepts_elbow = false;
  DirSet openings;
  DirSet arms;
};

using ResolvedPlacement = std::array<ElementAt, 3>;

// Orientations a piece may take. The mirror-symmetric piece keeps only its
// unflipped representatives; every flipped pose coincides with one of them.
inline std::vector<Orientation> orientations_for(const PieceDef& p) {
  std::vector<Orientation> out;
  for (Orientation o : all_orientations())
    if (!(p.mirror_symmetric && o.flip)) out.push_back(o);
  return out;
}

// nullopt when any element lands off the board.
inline std::optional<ResolvedPlacement> resolve(const BoardMap& b, const PieceSet& ps, const Placement& p) {
  const PieceDef& def = ps[p.piece];
  auto off = canonical_offsets(def.family);
  HexVec origin = b.position(p.anchor);
  ResolvedPlacement out;
  for (int i = 0; i < 3; ++i) {
    auto idx = static_cast<std::size_t>(i);
    auto spot = b.spot_at(origin + apply(p.orient, off[idx] - off[PieceDef::anchor_index]));
    if (!spot) return std::nullopt;
    const Element& e = def.elements[idx];
    out[idx] = ElementAt{*spot,
                         e.kind,
                         e.elbow,
                         e.accepts_elbow,
                         e.openings.transformed(p.orient),
                         canonical_arms(def.family, i).transformed(p.orient)};
  }
  return out;
}

inline bool mates(bool ball_elbow, DirSet ball_arms, DirSet ring_openings, bool ring_accepts_elbow) {
  return ball_arms.subset_of(ring_openings) && (!ball_elbow || ring_accepts_elbow);
}

// Per-spot occupant bookkeeping. A spot has an inside half (ball) and an
// outside half (ring); a circle fills both.
class Occupancy {
 public:
  struct Inside {
    enum class State { free, ball, circle } state = State::free;
    int owner = -1;
    bool elbow = false;
    DirSet arms;
    friend bool operator==(const Inside&, const Inside&) = default;
  };
  struct Outside {
    enum class State { free, ring, circle } state = State::free;
    int owner = -1;
    DirSet openings;
    bool accepts_elbow = false;
    friend bool operator==(const Outside&, const Outside&) = default;
  };

  Occupancy(const BoardMap& b, const PieceSet& ps)
      : board_(&b), pieces_(&ps), inside_(static_cast<std::size_t>(b.size())),
        outside_(static_cast<std::size_t>(b.size())), placed_(static_cast<std::size_t>(ps.size())) {}

  const BoardMap& board() const { return *board_; }
  const PieceSet& pieces() const { return *pieces_; }
  const Inside& inside(SpotId s) const { return inside_.at(static_cast<std::size_t>(s)); }
  const Outside& outside(SpotId s) const { return outside_.at(static_cast<std::size_t>(s)); }

  const std::optional<Placement>& placed(int piece) const { return placed_.at(static_cast<std::size_t>(piece)); }
  bool has_piece(int piece) const { return placed(piece).has_value(); }
  bool empty() const {
    return std::none_of(placed_.begin(), placed_.end(), [](const auto& p) { return p.has_value(); });
  }
  std::vector<Placement> placements() const {
    std::vector<Placement> out;
    for (const auto& p : placed_)
      if (p) out.push_back(*p);
    return out;
  }

  bool compatible(const ResolvedPlacement& elems) const {
    for (const ElementAt& e : elems) {
      const Inside& in = inside(e.spot);
      const Outside& out = outside(e.spot);
      switch (e.kind) {
        case Element::Kind::ball:
          if (in.state != Inside::State::free) return false;
          if (out.state == Outside::State::ring && !mates(e.elbow, e.arms, out.openings, out.accepts_elbow))
            return false;
          break;
        case Element::Kind::socket:
          if (out.state != Outside::State::free) return false;
          if (in.state == Inside::State::ball && !mates(in.elbow, in.arms, e.openings, e.accepts_elbow))
            return false;
          break;
        case Element::Kind::circle:
          if (in.state != Inside::State::free || out.state != Outside::State::free) return false;
          break;
      }
    }
    return true;
  }

  bool compatible(const Placement& p) const {
    if (has_piece(p.piece)) return false;
    auto elems = resolve(*board_, *pieces_, p);
    return elems && compatible(*elems);
  }

  // Leaves the occupancy unchanged when it throws.
  void place(const Placement& p) {
    if (has_piece(p.piece)) throw IncompatiblePlacement("piece '" + (*pieces_)[p.piece].name + "' is already placed");
    auto elems = resolve(*board_, *pieces_, p);
    if (!elems) throw IncompatiblePlacement("placement of '" + (*pieces_)[p.piece].name + "' leaves the board");
    if (!compatible(*elems)) throw IncompatiblePlacement("placement of '" + (*pieces_)[p.piece].name + "' collides");
    for (const ElementAt& e : *elems) {
      auto s = static_cast<std::size_t>(e.spot);
      switch (e.kind) {
        case Element::Kind::ball:
          inside_[s] = Inside{Inside::State::ball, p.piece, e.elbow, e.arms};
          break;
        case Element::Kind::socket:
          outside_[s] = Outside{Outside::State::ring, p.piece, e.openings, e.accepts_elbow};
          break;
        case Element::Kind::circle:
          inside_[s] = Inside{Inside::State::circle, p.piece, false, {}};
          outside_[s] = Outside{Outside::State::circle, p.piece, {}, false};
          break;
      }
    }
    placed_[static_cast<std::size_t>(p.piece)] = p;
  }

  void remove(const Placement& p) {
    if (placed(p.piece) != p) throw NotPresent("placement of '" + (*pieces_)[p.piece].name + "' is not present");
    for (auto& in : inside_)
      if (in.owner == p.piece) in = Inside{};
    for (auto& out : outside_)
      if (out.owner == p.piece) out = Outside{};
    placed_[static_cast<std::size_t>(p.piece)].reset();
  }

  friend bool operator==(const Occupancy& x, const Occupancy& y) {
    return x.inside_ == y.inside_ && x.outside_ == y.outside_ && x.placed_ == y.placed_;
  }

 private:
  const BoardMap* board_;
  const PieceSet* pieces_;
  std::vector<Inside> inside_;
  std::vector<Outside> outside_;
  std::vector<std::optional<Placement>> placed_;
};

using PieceMask = std::uint32_t;

inline PieceMask all_pieces_mask(const PieceSet& ps) { return (PieceMask{1} << ps.size()) - 1; }

// Placements of the pieces in `remaining` that fit the current occupancy,
// ordered by (piece, anchor, rot, flip).
inline std::vector<Placement> enumerate_legal(const BoardMap& b, const PieceSet& ps, const Occupancy& occ,
                                              PieceMask remaining) {
  std::vector<Placement> out;
  for (int piece = 0; piece < ps.size(); ++piece) {
    if (!((remaining >> piece) & 1u) || occ.has_piece(piece)) continue;
    auto orients = orientations_for(ps[piece]);
    for (SpotId anchor = 0; anchor < b.size(); ++anchor)
      for (Orientation o : orients) {
        Placement p{piece, anchor, o};
        auto elems = resolve(b, ps, p);
        if (elems && occ.compatible(*elems)) out.push_back(p);
      }
  }
  return out;
}

// Directions out of the socket at `e` that reach a board spot the placement
// does not itself occupy. Only those can ever host a mating ball's arm.
inline DirSet usable_openings(const BoardMap& b, const ResolvedPlacement& elems, const ElementAt& e) {
  DirSet out;
  for (Dir d = 0; d < 6; ++d) {
    if (!e.openings.contains(d)) continue;
    auto t = b.neighbor(e.spot, d);
    if (!t) continue;
    bool own = std::any_of(elems.begin(), elems.end(), [&](const ElementAt& x) { return x.spot == *t; });
    if (!own) out.insert(d);
  }
  return out;
}

// Straight pieces have a twin pose on the same spots with reflected socket
// openings. When the sockets differ from their reflection, an unmated socket
// means the twin also solves the puzzle.
inline bool has_twin_pose(const PieceDef& p) {
  if (p.family != Family::straight) return false;
  Orientation reflect{1, true};
  return std::any_of(p.elements.begin(), p.elements.end(), [&](const Element& e) {
    return e.kind == Element::Kind::socket && !(e.openings.transformed(reflect) == e.openings);
  });
}

struct FilteredPlacement {
  Placement placement;
  bool socket_must_mate = false;
};

struct UselessFilterOptions {
  bool uniqueness_assumed = true;
  // Apply the twin rule to every straight piece, not only the mirror one.
  bool all_straight_pieces = false;
};

inline bool twin_rule_applies(const PieceDef& p, const UselessFilterOptions& opt) {
  return opt.uniqueness_assumed && (p.mirror_symmetric || (opt.all_straight_pieces && has_twin_pose(p)));
}

// A twin-ambiguous placement whose sockets can never mate is dropped; the
// survivors must have a mated socket in any unique solution.
inline std::optional<FilteredPlacement> classify_useless(const BoardMap& b, const PieceSet& ps, const Placement& p,
                                                        const UselessFilterOptions& opt) {
  if (!twin_rule_applies(ps[p.piece], opt)) return FilteredPlacement{p, false};
  auto elems = resolve(b, ps, p);
  if (!elems) return std::nullopt;
  bool any_usable = std::any_of(elems->begin(), elems->end(), [&](const ElementAt& e) {
    return e.kind == Element::Kind::socket && !usable_openings(b, *elems, e).empty();
  });
  if (!any_usable) return std::nullopt;
  return FilteredPlacement{p, true};
}

inline std::vector<FilteredPlacement> useless_filter(const BoardMap& b, const PieceSet& ps,
                                                     const std::vector<Placement>& placements,
                                                     const UselessFilterOptions& opt = {}) {
  std::vector<FilteredPlacement> out;
  out.reserve(placements.size());
  for (const auto& p : placements)
    if (auto f = classify_useless(b, ps, p, opt)) out.push_back(*f);
  return out;
}

inline std::vector<FilteredPlacement> useless_filter(const BoardMap& b, const PieceSet& ps,
                                                     const std::vector<Placement>& placements,
                                                     bool uniqueness_assumed) {
  return useless_filter(b, ps, placements, UselessFilterOptions{uniqueness_assumed, false});
}

// One (ball owner, ring owner) edge per spot where a ball of one piece sits
// inside the ring of another.
inline std::vector<std::pair<int, int>> mated_pairs(const Occupancy& occ) {
  std::vector<std::pair<int, int>> out;
  for (SpotId s = 0; s < occ.board().size(); ++s) {
    const auto& in = occ.inside(s);
    const auto& out_half = occ.outside(s);
    if (in.state == Occupancy::Inside::State::ball && out_half.state == Occupancy::Outside::State::ring &&
        in.owner != out_half.owner)
      out.emplace_back(in.owner, out_half.owner);
  }
  return out;
}

// Number of connected components of the mated-pair graph over placed pieces.
inline int link_components(const Occupancy& occ) {
  auto n = static_cast<std::size_t>(occ.pieces().size());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : mated_pairs(occ)) parent[find(static_cast<std::size_t>(a))] = find(static_cast<std::size_t>(b));
  int components = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (occ.has_piece(static_cast<int>(i)) && find(i) == i) ++components;
  return components;
}

// True iff placing p would mate with a piece already on the board. On an
// empty board every legal placement counts as linkable.
inline bool linkable(const Placement& p, const Occupancy& occ) {
  if (occ.empty()) return true;
  auto elems = resolve(occ.board(), occ.pieces(), p);
  if (!elems) return false;
  for (const ElementAt& e : *elems) {
    if (e.kind == Element::Kind::ball && occ.outside(e.spot).state == Occupancy::Outside::State::ring) return true;
    if (e.kind == Element::Kind::socket && occ.inside(e.spot).state == Occupancy::Inside::State::ball) return true;
  }
  return false;
}

inline bool same_pose(const ResolvedPlacement& x, const ResolvedPlacement& y) {
  auto key = [](const ElementAt& e) {
    return std::tuple(e.spot, static_cast<int>(e.kind), e.elbow, e.accepts_elbow, e.openings.bits(), e.arms.bits());
  };
  std::array<decltype(key(x[0])), 3> kx, ky;
  for (std::size_t i = 0; i < 3; ++i) {
    kx[i] = key(x[i]);
    ky[i] = key(y[i]);
  }
  std::sort(kx.begin(), kx.end());
  std::sort(ky.begin(), ky.end());
  return kx == ky;
}

// Maps a placement to the representative with the same pose among the
// piece's canonical orientations. nullopt when it leaves the board.
inline std::optional<Placement> canonicalize(const BoardMap& b, const PieceSet& ps, const Placement& p) {
  auto elems = resolve(b, ps, p);
  if (!elems) return std::nullopt;
  for (Orientation o : orientations_for(ps[p.piece])) {
    if (o == p.orient) return p;
  }
  for (SpotId anchor = 0; anchor < b.size(); ++anchor)
    for (Orientation o : orientations_for(ps[p.piece])) {
      Placement q{p.piece, anchor, o};
      auto other = resolve(b, ps, q);
      if (other && same_pose(*elems, *other)) return q;
    }
  return std::nullopt;
}

inline std::string format_placement(const PieceSet& ps, const Placement& p) {
  return ps[p.piece].name + " anchor=" + std::to_string(p.anchor) + " rot=" + std::to_string(p.orient.rot) +
         " flip=" + (p.orient.flip ? "1" : "0");
}

// Parses `<piece-name> anchor=<spotId> rot=<0-5> flip=<0|1>` from an
// already tokenized line.
inline Placement parse_placement(const PieceSet& ps, const BoardMap& b, const detail::Line& line) {
  const auto& t = line.tokens;
  if (t.size() != 4) throw ParseError(line.number, 0, "expected '<piece> anchor=<spot> rot=<0-5> flip=<0|1>'");
  auto piece = ps.index_of(t[0].text);
  if (!piece) throw ParseError(line.number, t[0].column, "unknown piece '" + std::string(t[0].text) + "'");
  auto anchor = detail::value_of(t[1], "anchor");
  auto rot = detail::value_of(t[2], "rot");
  auto fl = detail::value_of(t[3], "flip");
  if (!anchor) throw ParseError(line.number, t[1].column, "expected anchor=<spot>");
  if (!rot) throw ParseError(line.number, t[2].column, "expected rot=<0-5>");
  if (!fl) throw ParseError(line.number, t[3].column, "expected flip=<0|1>");
  Placement p;
  p.piece = *piece;
  p.anchor = detail::parse_int(*anchor, line.number, t[1].column + 7);
  p.orient.rot = detail::parse_int(*rot, line.number, t[2].column + 4);
  p.orient.flip = detail::parse_bool01(*fl, line.number, t[3].column + 5);
  if (p.anchor < 0 || p.anchor >= b.size())
    throw ParseError(line.number, t[1].column, "anchor " + std::to_string(p.anchor) + " is not a board spot");
  if (p.orient.rot < 0 || p.orient.rot > 5) throw ParseError(line.number, t[2].column, "rot must be 0..5");
  if (ps[p.piece].mirror_symmetric && p.orient.flip) {
    auto canon = canonicalize(b, ps, p);
    if (!canon) throw ParseError(line.number, t[0].column, "placement leaves the board");
    p = *canon;
  }
  return p;
}

}  // namespace hexlink
