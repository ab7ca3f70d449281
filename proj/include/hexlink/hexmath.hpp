#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>

namespace hexlink {

// Lattice vector in tri-ordinate form. Only the horizontal (a) and
// positive-slope (b) steps are stored; the third tri-ordinate is a + b.
struct HexVec {
  int a = 0;
  int b = 0;

  constexpr int s() const { return a + b; }

  constexpr HexVec operator+(HexVec o) const { return {a + o.a, b + o.b}; }
  constexpr HexVec operator-(HexVec o) const { return {a - o.a, b - o.b}; }
  friend constexpr auto operator<=>(HexVec, HexVec) = default;
};

inline std::ostream& operator<<(std::ostream& os, HexVec v) {
  return os << '(' << v.a << ',' << v.b << ',' << v.s() << ')';
}

constexpr HexVec rotate60(HexVec v) { return {v.a + v.b, -v.a}; }
constexpr HexVec flip(HexVec v) { return {v.b, v.a}; }

// Index 0..5 into the unit ring; ring(d + 1) == rotate60(ring(d)).
using Dir = int;

inline constexpr std::array<HexVec, 6> kRing{
    HexVec{1, 0}, HexVec{1, -1}, HexVec{0, -1},
    HexVec{-1, 0}, HexVec{-1, 1}, HexVec{0, 1}};

constexpr HexVec ring(Dir d) { return kRing[static_cast<std::size_t>(((d % 6) + 6) % 6)]; }
constexpr Dir opposite(Dir d) { return (d + 3) % 6; }

// One element of the dihedral group of order 12. Flip is applied first.
struct Orientation {
  int rot = 0;
  bool flip = false;

  friend constexpr auto operator<=>(Orientation, Orientation) = default;
};

constexpr HexVec apply(Orientation o, HexVec v) {
  if (o.flip) v = flip(v);
  for (int i = 0; i < o.rot; ++i) v = rotate60(v);
  return v;
}

constexpr Dir dir_apply(Orientation o, Dir d) {
  if (o.flip) d = 5 - d;
  return (d + o.rot) % 6;
}

// All 12 orientations in (rot, flip) order.
constexpr std::array<Orientation, 12> all_orientations() {
  std::array<Orientation, 12> out{};
  std::size_t i = 0;
  for (int rot = 0; rot < 6; ++rot)
    for (bool f : {false, true}) out[i++] = Orientation{rot, f};
  return out;
}

// Set of ring directions, one bit per direction.
class DirSet {
 public:
  constexpr DirSet() = default;
  constexpr explicit DirSet(std::uint8_t bits) : bits_(bits & 0x3f) {}

  constexpr bool contains(Dir d) const { return (bits_ >> d) & 1u; }
  constexpr void insert(Dir d) { bits_ |= static_cast<std::uint8_t>(1u << d); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr int size() const {
    int n = 0;
    for (Dir d = 0; d < 6; ++d) n += contains(d) ? 1 : 0;
    return n;
  }
  constexpr bool subset_of(DirSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(DirSet o) const { return (bits_ & o.bits_) != 0; }

  constexpr DirSet transformed(Orientation o) const {
    DirSet out;
    for (Dir d = 0; d < 6; ++d)
      if (contains(d)) out.insert(dir_apply(o, d));
    return out;
  }

  friend constexpr bool operator==(DirSet, DirSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

}  // namespace hexlink
