#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "hexlink/challenges.hpp"

namespace support {

using namespace hexlink;

inline const Solver& solver() {
  static const Solver s(builtin_board(), builtin_pieces());
  return s;
}

// Complete tilings for seeds 1..n, generated once per process.
inline std::span<const Solution> tilings(std::size_t n) {
  static std::vector<Solution> cache;
  while (cache.size() < n) cache.push_back(generate_full(solver(), cache.size() + 1));
  return std::span<const Solution>(cache).first(n);
}

inline Puzzle without(const Solution& s, const std::vector<int>& removed) {
  Puzzle p;
  for (const Placement& x : s.placements)
    if (std::find(removed.begin(), removed.end(), x.piece) == removed.end()) p.givens.push_back(x);
  return p;
}

inline PartialAssignment assignment_of(const PlacementTable& t, const std::vector<Placement>& givens) {
  PartialAssignment a(t.pieces().size());
  for (const Placement& p : givens) a.add(t, *t.index_of(p));
  return a;
}

}  // namespace support
