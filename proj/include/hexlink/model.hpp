#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hexlink/detail/text.hpp"
#include "hexlink/error.hpp"
#include "hexlink/hexmath.hpp"

namespace hexlink {

using SpotId = int;

inline constexpr int kMaxSpots = 64;
inline constexpr int kPieceCount = 12;

// Spots on the play area, addressed by axial lattice position (q = a, r = b).
class BoardMap {
 public:
  BoardMap() = default;

  explicit BoardMap(std::vector<HexVec> positions) : positions_(std::move(positions)) {
    for (SpotId s = 0; s < size(); ++s) index_.emplace(positions_[s], s);
    neighbors_.resize(positions_.size());
    for (SpotId s = 0; s < size(); ++s)
      for (Dir d = 0; d < 6; ++d) {
        auto it = index_.find(positions_[s] + ring(d));
        neighbors_[s][d] = it == index_.end() ? -1 : it->second;
      }
  }

  int size() const { return static_cast<int>(positions_.size()); }
  HexVec position(SpotId s) const { return positions_.at(static_cast<std::size_t>(s)); }
  const std::vector<HexVec>& positions() const { return positions_; }

  std::optional<SpotId> spot_at(HexVec v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<SpotId> neighbor(SpotId s, Dir d) const {
    SpotId t = neighbors_.at(static_cast<std::size_t>(s))[d];
    if (t < 0) return std::nullopt;
    return t;
  }

  friend bool operator==(const BoardMap& x, const BoardMap& y) { return x.positions_ == y.positions_; }

 private:
  std::vector<HexVec> positions_;
  std::map<HexVec, SpotId> index_;
  std::vector<std::array<SpotId, 6>> neighbors_;
};

inline std::optional<SpotId> spot_neighbor(const BoardMap& b, SpotId s, Dir d) { return b.neighbor(s, d); }

// Four rows of six, hex packed; rows 2 and 3 are shifted one step along -q.
inline BoardMap builtin_board() {
  std::vector<HexVec> spots;
  for (int r = 0; r < 4; ++r) {
    int q0 = r < 2 ? 0 : -1;
    for (int q = q0; q < q0 + 6; ++q) spots.push_back({q, r});
  }
  return BoardMap(std::move(spots));
}

// Accepts the token "builtin" or `spot <id> q=<int> r=<int>` lines with ids
// 0..n-1. Boards other than 24 spots are allowed but reported in warnings.
inline BoardMap load_board(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  auto lines = detail::tokenize(text);
  if (lines.size() == 1 && lines[0].tokens.size() == 1 && lines[0].tokens[0].text == "builtin")
    return builtin_board();

  std::map<int, HexVec> by_id;
  for (const auto& line : lines) {
    const auto& t = line.tokens;
    if (t[0].text != "spot")
      throw ParseError(line.number, t[0].column, "expected 'spot', got '" + std::string(t[0].text) + "'");
    if (t.size() != 4) throw ParseError(line.number, 0, "expected 'spot <id> q=<int> r=<int>'");
    int id = detail::parse_int(t[1].text, line.number, t[1].column);
    auto q = detail::value_of(t[2], "q");
    auto r = detail::value_of(t[3], "r");
    if (!q) throw ParseError(line.number, t[2].column, "expected q=<int>");
    if (!r) throw ParseError(line.number, t[3].column, "expected r=<int>");
    HexVec pos{detail::parse_int(*q, line.number, t[2].column + 2),
               detail::parse_int(*r, line.number, t[3].column + 2)};
    if (!by_id.emplace(id, pos).second)
      throw ParseError(line.number, t[1].column, "duplicate spot id " + std::to_string(id));
  }

  if (by_id.empty()) throw ValidationError("board has no spots");
  if (by_id.size() > static_cast<std::size_t>(kMaxSpots))
    throw ValidationError("board has " + std::to_string(by_id.size()) + " spots, limit is 64");
  std::vector<HexVec> positions;
  for (const auto& [id, pos] : by_id) {
    if (id != static_cast<int>(positions.size()))
      throw ValidationError("spot ids must be contiguous from 0; missing " + std::to_string(positions.size()));
    if (std::find(positions.begin(), positions.end(), pos) != positions.end())
      throw ValidationError("two spots share position q=" + std::to_string(pos.a) + " r=" + std::to_string(pos.b));
    positions.push_back(pos);
  }
  if (positions.size() != 24 && warnings)
    warnings->push_back("board has " + std::to_string(positions.size()) + " spots, expected 24");
  return BoardMap(std::move(positions));
}

inline std::string serialize_board(const BoardMap& b) {
  std::ostringstream os;
  for (SpotId s = 0; s < b.size(); ++s)
    os << "spot " << s << " q=" << b.position(s).a << " r=" << b.position(s).b << '\n';
  return os.str();
}

enum class Family { straight, obtuse, acute };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::straight: return "straight";
    case Family::obtuse: return "obtuse";
    case Family::acute: return "acute";
  }
  return "?";
}

// Element path offsets in the spot lattice, element 0 first.
inline constexpr std::array<HexVec, 3> canonical_offsets(Family f) {
  switch (f) {
    case Family::straight: return {HexVec{0, 0}, HexVec{1, 0}, HexVec{2, 0}};
    case Family::obtuse: return {HexVec{0, 0}, HexVec{1, 0}, HexVec{1, 1}};
    case Family::acute: return {HexVec{0, 0}, HexVec{1, 0}, HexVec{0, 1}};
  }
  return {};
}

inline Dir direction_between(HexVec from, HexVec to) {
  for (Dir d = 0; d < 6; ++d)
    if (from + ring(d) == to) return d;
  return -1;
}

// Directions from element i toward its path neighbours, in the piece frame.
inline DirSet canonical_arms(Family f, int i) {
  auto off = canonical_offsets(f);
  DirSet arms;
  if (i > 0) arms.insert(direction_between(off[i], off[i - 1]));
  if (i < 2) arms.insert(direction_between(off[i], off[i + 1]));
  return arms;
}

struct Element {
  enum class Kind { ball, socket, circle };

  Kind kind = Kind::ball;
  bool elbow = false;          // balls only
  DirSet openings;             // sockets only, piece frame
  bool accepts_elbow = false;  // sockets only

  friend bool operator==(const Element&, const Element&) = default;
};

inline std::string_view to_string(Element::Kind k) {
  switch (k) {
    case Element::Kind::ball: return "ball";
    case Element::Kind::socket: return "socket";
    case Element::Kind::circle: return "circle";
  }
  return "?";
}

struct PieceDef {
  std::string name;
  Family family = Family::straight;
  std::array<Element, 3> elements{};
  bool mirror_symmetric = false;

  static constexpr int anchor_index = 0;

  int count(Element::Kind k) const {
    return static_cast<int>(std::count_if(elements.begin(), elements.end(),
                                          [k](const Element& e) { return e.kind == k; }));
  }

  friend bool operator==(const PieceDef&, const PieceDef&) = default;
};

struct ElementTotals {
  int balls = 0;
  int sockets = 0;
  int circles = 0;
};

class PieceSet {
 public:
  PieceSet() = default;
  explicit PieceSet(std::vector<PieceDef> pieces) : pieces_(std::move(pieces)) {}

  int size() const { return static_cast<int>(pieces_.size()); }
  const PieceDef& operator[](int i) const { return pieces_.at(static_cast<std::size_t>(i)); }
  const std::vector<PieceDef>& pieces() const { return pieces_; }
  auto begin() const { return pieces_.begin(); }
  auto end() const { return pieces_.end(); }

  std::optional<int> index_of(std::string_view name) const {
    for (int i = 0; i < size(); ++i)
      if (pieces_[static_cast<std::size_t>(i)].name == name) return i;
    return std::nullopt;
  }

  ElementTotals totals() const {
    ElementTotals t;
    for (const auto& p : pieces_) {
      t.balls += p.count(Element::Kind::ball);
      t.sockets += p.count(Element::Kind::socket);
      t.circles += p.count(Element::Kind::circle);
    }
    return t;
  }

  friend bool operator==(const PieceSet&, const PieceSet&) = default;

 private:
  std::vector<PieceDef> pieces_;
};

// Category multiplicities: (2 balls + socket, ball + 2 sockets,
// 2 sockets + circle, ball + circle + socket).
struct CategoryCounts {
  int two_balls_socket = 0;
  int ball_two_sockets = 0;
  int two_sockets_circle = 0;
  int ball_circle_socket = 0;
};

inline std::optional<int> category_of(const PieceDef& p) {
  int b = p.count(Element::Kind::ball), s = p.count(Element::Kind::socket),
      c = p.count(Element::Kind::circle);
  if (b == 2 && s == 1) return 0;
  if (b == 1 && s == 2) return 1;
  if (s == 2 && c == 1) return 2;
  if (b == 1 && c == 1 && s == 1) return 3;
  return std::nullopt;
}

inline CategoryCounts category_counts(const PieceSet& ps) {
  CategoryCounts cc;
  for (const auto& p : ps) {
    switch (category_of(p).value_or(-1)) {
      case 0: ++cc.two_balls_socket; break;
      case 1: ++cc.ball_two_sockets; break;
      case 2: ++cc.two_sockets_circle; break;
      case 3: ++cc.ball_circle_socket; break;
      default: break;
    }
  }
  return cc;
}

// Number of geometrically distinct poses over the 12 orientations, comparing
// element kinds, socket openings and positions up to translation.
inline int distinct_pose_count(const PieceDef& p) {
  using Rec = std::array<int, 6>;
  auto off = canonical_offsets(p.family);
  std::vector<std::array<Rec, 3>> poses;
  for (Orientation o : all_orientations()) {
    std::array<Rec, 3> pose;
    HexVec lo{1 << 20, 1 << 20};
    std::array<HexVec, 3> pos;
    for (std::size_t i = 0; i < 3; ++i) {
      pos[i] = apply(o, off[i]);
      lo = std::min(lo, pos[i]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const Element& e = p.elements[i];
      HexVec rel = pos[i] - lo;
      pose[i] = Rec{rel.a, rel.b, static_cast<int>(e.kind), e.elbow ? 1 : 0,
                    e.openings.transformed(o).bits() | (e.accepts_elbow ? 64 : 0),
                    canonical_arms(p.family, static_cast<int>(i)).transformed(o).bits()};
    }
    std::sort(pose.begin(), pose.end());
    if (std::find(poses.begin(), poses.end(), pose) == poses.end()) poses.push_back(pose);
  }
  return static_cast<int>(poses.size());
}

inline void validate_pieces(const PieceSet& ps) {
  if (ps.size() != kPieceCount)
    throw ValidationError("piece count " + std::to_string(ps.size()) + " != 12");

  for (const auto& p : ps) {
    if (std::count_if(ps.begin(), ps.end(), [&](const PieceDef& q) { return q.name == p.name; }) > 1)
      throw ValidationError("duplicate piece name '" + p.name + "'");
    if (p.elements[0].kind == Element::Kind::socket)
      throw ValidationError("piece '" + p.name + "': anchor element must be a ball or circle");
    if (!category_of(p))
      throw ValidationError("piece '" + p.name + "': element mix is not one of the four categories");
    for (int i = 0; i < 3; ++i) {
      const Element& e = p.elements[static_cast<std::size_t>(i)];
      if (e.kind != Element::Kind::ball && e.elbow)
        throw ValidationError("piece '" + p.name + "': only balls can be elbows");
      if (e.kind != Element::Kind::socket && (!e.openings.empty() || e.accepts_elbow))
        throw ValidationError("piece '" + p.name + "': only sockets have openings");
      if (e.kind == Element::Kind::socket) {
        if (e.openings.empty())
          throw ValidationError("piece '" + p.name + "': socket " + std::to_string(i) + " has no openings");
        if (e.openings.intersects(canonical_arms(p.family, i)))
          throw ValidationError("piece '" + p.name + "': socket " + std::to_string(i) +
                                " opens along its own arm");
      }
    }
    int poses = distinct_pose_count(p);
    if (p.mirror_symmetric && poses != 6)
      throw ValidationError("piece '" + p.name + "' is marked mirror=1 but has " + std::to_string(poses) +
                            " distinct poses, expected 6");
    if (!p.mirror_symmetric && poses != 12)
      throw ValidationError("piece '" + p.name + "' has " + std::to_string(poses) +
                            " distinct poses, expected 12 (flip or rotational symmetry)");
  }

  ElementTotals t = ps.totals();
  if (t.balls != 16) throw ValidationError("ball count " + std::to_string(t.balls) + " != 16");
  if (t.sockets != 14) throw ValidationError("socket count " + std::to_string(t.sockets) + " != 14");
  if (t.circles != 6) throw ValidationError("circle count " + std::to_string(t.circles) + " != 6");

  int mirrors = static_cast<int>(std::count_if(ps.begin(), ps.end(), [](const PieceDef& p) { return p.mirror_symmetric; }));
  if (mirrors != 1)
    throw ValidationError("mirror-symmetric piece count " + std::to_string(mirrors) + " != 1");

  std::array<int, 3> fam{};
  for (const auto& p : ps) ++fam[static_cast<std::size_t>(p.family)];
  if (fam != std::array<int, 3>{3, 5, 4})
    throw ValidationError("family sizes " + std::to_string(fam[0]) + "/" + std::to_string(fam[1]) + "/" +
                          std::to_string(fam[2]) + " != 3/5/4");

  int elbow_pieces = 0, accepting = 0;
  for (const auto& p : ps) {
    bool has_elbow = false;
    for (const auto& e : p.elements) {
      has_elbow |= e.elbow;
      accepting += e.accepts_elbow ? 1 : 0;
    }
    if (has_elbow) {
      ++elbow_pieces;
      if (p.family != Family::acute)
        throw ValidationError("piece '" + p.name + "': elbow balls belong to acute pieces");
    }
  }
  if (elbow_pieces != 2) throw ValidationError("elbow piece count " + std::to_string(elbow_pieces) + " != 2");
  if (accepting != 1)
    throw ValidationError("elbow-accepting socket count " + std::to_string(accepting) + " != 1");
}

inline PieceSet parse_pieces(std::string_view text) {
  std::vector<PieceDef> pieces;
  std::vector<std::array<bool, 3>> seen;
  for (const auto& line : detail::tokenize(text)) {
    const auto& t = line.tokens;
    if (t[0].text == "piece") {
      if (t.size() < 2) throw ParseError(line.number, 0, "expected 'piece <name> family=... mirror=...'");
      PieceDef p;
      p.name = std::string(t[1].text);
      bool have_family = false;
      for (std::size_t i = 2; i < t.size(); ++i) {
        if (auto v = detail::value_of(t[i], "family")) {
          if (*v == "straight") p.family = Family::straight;
          else if (*v == "obtuse") p.family = Family::obtuse;
          else if (*v == "acute") p.family = Family::acute;
          else throw ParseError(line.number, t[i].column, "unknown family '" + std::string(*v) + "'");
          have_family = true;
        } else if (auto m = detail::value_of(t[i], "mirror")) {
          p.mirror_symmetric = detail::parse_bool01(*m, line.number, t[i].column);
        } else {
          throw ParseError(line.number, t[i].column, "unknown attribute '" + std::string(t[i].text) + "'");
        }
      }
      if (!have_family) throw ParseError(line.number, 0, "piece '" + p.name + "' has no family");
      pieces.push_back(std::move(p));
      seen.push_back({});
    } else if (t[0].text == "elem") {
      if (pieces.empty()) throw ParseError(line.number, 1, "'elem' before any 'piece'");
      if (t.size() < 3) throw ParseError(line.number, 0, "expected 'elem <i> type=...'");
      int idx = detail::parse_int(t[1].text, line.number, t[1].column);
      if (idx < 0 || idx > 2) throw ParseError(line.number, t[1].column, "element index must be 0..2");
      if (seen.back()[static_cast<std::size_t>(idx)])
        throw ParseError(line.number, t[1].column, "element " + std::to_string(idx) + " given twice");
      seen.back()[static_cast<std::size_t>(idx)] = true;
      Element e;
      bool have_type = false;
      for (std::size_t i = 2; i < t.size(); ++i) {
        int col = t[i].column;
        if (auto v = detail::value_of(t[i], "type")) {
          if (*v == "ball") e.kind = Element::Kind::ball;
          else if (*v == "socket") e.kind = Element::Kind::socket;
          else if (*v == "circle") e.kind = Element::Kind::circle;
          else throw ParseError(line.number, col, "unknown element type '" + std::string(*v) + "'");
          have_type = true;
        } else if (auto el = detail::value_of(t[i], "elbow")) {
          e.elbow = detail::parse_bool01(*el, line.number, col);
        } else if (auto ae = detail::value_of(t[i], "accepts_elbow")) {
          e.accepts_elbow = detail::parse_bool01(*ae, line.number, col);
        } else if (auto op = detail::value_of(t[i], "openings")) {
          std::string_view rest = *op;
          while (!rest.empty()) {
            auto comma = rest.find(',');
            auto item = rest.substr(0, comma);
            int d = detail::parse_int(item, line.number, col);
            if (d < 0 || d > 5) throw ParseError(line.number, col, "direction must be 0..5");
            e.openings.insert(d);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
          }
        } else {
          throw ParseError(line.number, col, "unknown attribute '" + std::string(t[i].text) + "'");
        }
      }
      if (!have_type) throw ParseError(line.number, 0, "element has no type");
      pieces.back().elements[static_cast<std::size_t>(idx)] = e;
    } else {
      throw ParseError(line.number, t[0].column, "expected 'piece' or 'elem', got '" + std::string(t[0].text) + "'");
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (seen[i] != std::array<bool, 3>{true, true, true})
      throw ValidationError("piece '" + pieces[i].name + "' does not define all three elements");
  return PieceSet(std::move(pieces));
}

inline std::string serialize_pieces(const PieceSet& ps) {
  std::ostringstream os;
  for (const auto& p : ps) {
    os << "piece " << p.name << " family=" << to_string(p.family) << " mirror=" << (p.mirror_symmetric ? 1 : 0)
       << '\n';
    for (int i = 0; i < 3; ++i) {
      const Element& e = p.elements[static_cast<std::size_t>(i)];
      os << "  elem " << i << " type=" << to_string(e.kind);
      if (e.kind == Element::Kind::ball && e.elbow) os << " elbow=1";
      if (e.kind == Element::Kind::socket) {
        os << " openings=";
        bool first = true;
        for (Dir d = 0; d < 6; ++d)
          if (e.openings.contains(d)) {
            os << (first ? "" : ",") << d;
            first = false;
          }
        if (e.accepts_elbow) os << " accepts_elbow=1";
      }
      os << '\n';
    }
  }
  return os.str();
}

// Parses and validates a piece file.
inline PieceSet load_pieces(std::string_view text) {
  PieceSet ps = parse_pieces(text);
  validate_pieces(ps);
  return ps;
}

// Reference roster; the same text ships as data/pieces.txt.
inline constexpr std::string_view kBuiltinPiecesText = R"(
# Reference piece roster: 12 pieces, 16 balls, 14 sockets, 6 circles.
# Directions 0..5 run (1,0) (1,-1) (0,-1) (-1,0) (-1,1) (0,1) in the piece frame.
piece light_purple family=straight mirror=1
  elem 0 type=ball
  elem 1 type=socket openings=1,2 accepts_elbow=1
  elem 2 type=ball
piece light_green family=straight mirror=0
  elem 0 type=ball
  elem 1 type=ball
  elem 2 type=socket openings=5
piece aqua family=straight mirror=0
  elem 0 type=circle
  elem 1 type=socket openings=5
  elem 2 type=ball
piece yellow family=obtuse mirror=0
  elem 0 type=ball
  elem 1 type=socket openings=0,1
  elem 2 type=socket openings=4,5
piece blue family=obtuse mirror=0
  elem 0 type=circle
  elem 1 type=socket openings=1
  elem 2 type=ball
piece light_pink family=obtuse mirror=0
  elem 0 type=ball
  elem 1 type=circle
  elem 2 type=socket openings=4
piece dark_pink family=obtuse mirror=0
  elem 0 type=circle
  elem 1 type=socket openings=1,2
  elem 2 type=socket openings=1
piece dark_purple family=obtuse mirror=0
  elem 0 type=ball
  elem 1 type=ball
  elem 2 type=socket openings=0,5
piece orange family=acute mirror=0
  elem 0 type=circle
  elem 1 type=ball
  elem 2 type=socket openings=0
piece red family=acute mirror=0
  elem 0 type=ball
  elem 1 type=ball
  elem 2 type=socket openings=4,5
piece dark_green family=acute mirror=0
  elem 0 type=ball
  elem 1 type=ball elbow=1
  elem 2 type=socket openings=0,5
piece dark_blue family=acute mirror=0
  elem 0 type=circle
  elem 1 type=ball elbow=1
  elem 2 type=socket openings=0,5
)";

inline PieceSet builtin_pieces() { return load_pieces(kBuiltinPiecesText); }

}  // namespace hexlink
