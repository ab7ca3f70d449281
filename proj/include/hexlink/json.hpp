#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hexlink/challenges.hpp"
#include "hexlink/pruning.hpp"
#include "hexlink/solver.hpp"

namespace hexlink {

using json = nlohmann::ordered_json;

inline json to_json(const PieceSet& ps, const Placement& p) {
  return {{"piece", ps[p.piece].name}, {"anchor", p.anchor}, {"rot", p.orient.rot}, {"flip", p.orient.flip ? 1 : 0}};
}

inline json to_json(const PieceSet& ps, const std::vector<Placement>& list) {
  json a = json::array();
  for (const Placement& p : list) a.push_back(to_json(ps, p));
  return a;
}

inline Placement placement_from_json(const PieceSet& ps, const BoardMap& b, const json& j) {
  auto piece = ps.index_of(j.at("piece").get<std::string>());
  if (!piece) throw InvalidPuzzle("unknown piece '" + j.at("piece").get<std::string>() + "'");
  Placement p{*piece, j.at("anchor").get<int>(), Orientation{j.at("rot").get<int>(), j.at("flip").get<int>() != 0}};
  if (p.anchor < 0 || p.anchor >= b.size() || p.orient.rot < 0 || p.orient.rot > 5)
    throw InvalidPuzzle("placement of '" + ps[p.piece].name + "' is out of range");
  if (auto canon = canonicalize(b, ps, p)) p = *canon;
  return p;
}

inline std::vector<Placement> placements_from_json(const PieceSet& ps, const BoardMap& b, const json& j) {
  std::vector<Placement> out;
  for (const auto& x : j) out.push_back(placement_from_json(ps, b, x));
  std::sort(out.begin(), out.end());
  return out;
}

inline json to_json(const SearchStats& s) {
  json ratios = json::array();
  for (const LinkRatio& r : s.ratios) ratios.push_back({r.linkable, r.legal});
  json j{{"nodes", s.nodes_expanded},
         {"ratios", ratios},
         {"first_solution_index", s.first_solution_index},
         {"wall_ms", s.wall_ms},
         {"leaves", s.leaves},
         {"truncated", s.truncated}};
  j["root_ratio"] = s.root_ratio ? json{s.root_ratio->linkable, s.root_ratio->legal} : json(nullptr);
  return j;
}

inline json to_json(const PieceSet& ps, const Challenge& c) {
  return {{"level", c.level ? json(std::string(to_string(*c.level))) : json(nullptr)},
          {"missing", c.missing()},
          {"certified_unique", c.certified_unique},
          {"puzzle", to_json(ps, c.puzzle.givens)},
          {"solution", to_json(ps, c.ground_truth.placements)},
          {"stats", to_json(c.stats)}};
}

inline Challenge challenge_from_json(const PieceSet& ps, const BoardMap& b, const json& j) {
  Challenge c;
  if (!j.at("level").is_null()) c.level = level_from_string(j.at("level").get<std::string>());
  c.certified_unique = j.value("certified_unique", false);
  c.puzzle.givens = placements_from_json(ps, b, j.at("puzzle"));
  c.ground_truth.placements = placements_from_json(ps, b, j.at("solution"));
  return c;
}

inline json to_json(const BoardMap& b, const HeatMap& h) {
  json spots = json::array();
  int lo = 0, hi = 0;
  for (SpotId s = 0; s < b.size(); ++s) {
    int in = h.inside[static_cast<std::size_t>(s)], out = h.outside[static_cast<std::size_t>(s)];
    spots.push_back({{"id", s}, {"q", b.position(s).a}, {"r", b.position(s).b}, {"inside", in}, {"outside", out}});
    lo = s == 0 ? std::min(in, out) : std::min({lo, in, out});
    hi = s == 0 ? std::max(in, out) : std::max({hi, in, out});
  }
  return {{"spots", spots}, {"min", lo}, {"max", hi}};
}

// Per-spot dump of both halves, for checking rendered figures.
inline json to_json(const Occupancy& occ) {
  const PieceSet& ps = occ.pieces();
  const BoardMap& b = occ.board();
  json spots = json::array();
  auto owner = [&](int o) { return o < 0 ? json(nullptr) : json(ps[o].name); };
  for (SpotId s = 0; s < b.size(); ++s) {
    const auto& in = occ.inside(s);
    const auto& out = occ.outside(s);
    const char* in_state = in.state == Occupancy::Inside::State::ball     ? "ball"
                           : in.state == Occupancy::Inside::State::circle ? "circle"
                                                                          : "free";
    const char* out_state = out.state == Occupancy::Outside::State::ring     ? "ring"
                            : out.state == Occupancy::Outside::State::circle ? "circle"
                                                                             : "free";
    spots.push_back({{"id", s},
                     {"q", b.position(s).a},
                     {"r", b.position(s).b},
                     {"inside", {{"state", in_state}, {"piece", owner(in.owner)}}},
                     {"outside", {{"state", out_state}, {"piece", owner(out.owner)}}}});
  }
  return {{"spots", spots}, {"placements", to_json(ps, occ.placements())}};
}

}  // namespace hexlink
