#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hexlink/hexmath.hpp"

using namespace hexlink;

TEST(Hexmath, RotateExamples) {
  EXPECT_EQ(rotate60({1, 3}), (HexVec{4, -1}));
  EXPECT_EQ(rotate60({4, -1}), (HexVec{3, -4}));
  EXPECT_EQ(rotate60({0, 0}), (HexVec{0, 0}));
}

TEST(Hexmath, FlipExamples) {
  EXPECT_EQ(flip({1, 3}), (HexVec{3, 1}));
  EXPECT_EQ(flip({2, 2}), (HexVec{2, 2}));
  EXPECT_EQ(flip(flip({7, -4})), (HexVec{7, -4}));
}

TEST(Hexmath, ApplyExamples) {
  EXPECT_EQ(apply({1, true}, {1, 3}), (HexVec{4, -3}));
  EXPECT_EQ(apply({0, false}, {-5, 2}), (HexVec{-5, 2}));
  EXPECT_EQ(apply({5, true}, {1, 3}), (HexVec{-1, 4}));
}

TEST(Hexmath, DirApplyExamples) {
  EXPECT_EQ(dir_apply({1, false}, 0), 1);
  EXPECT_EQ(dir_apply({0, true}, 1), 4);
  EXPECT_EQ(dir_apply({0, false}, 3), 3);
}

TEST(Hexmath, TriOrdinateIsSum) {
  HexVec v{4, -1};
  EXPECT_EQ(v.s(), 3);
}

TEST(Hexmath, RingIsClosedUnderRotation) {
  for (Dir d = 0; d < 6; ++d) {
    EXPECT_EQ(rotate60(ring(d)), ring(d + 1));
    EXPECT_EQ(ring(d) + ring(opposite(d)), (HexVec{0, 0}));
  }
}

// Distance in the hex metric; the group must preserve it.
static int norm(HexVec v) { return (std::abs(v.a) + std::abs(v.b) + std::abs(v.s())) / 2; }

TEST(HexmathProperty, GroupLaws) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coord(-20, 20);
  for (int i = 0; i < 2000; ++i) {
    HexVec v{coord(rng), coord(rng)};
    HexVec w = v;
    for (int k = 0; k < 6; ++k) w = rotate60(w);
    EXPECT_EQ(w, v);
    EXPECT_EQ(flip(flip(v)), v);
    for (Orientation o : all_orientations()) EXPECT_EQ(norm(apply(o, v)), norm(v));
    // flip conjugates rotation to its inverse
    EXPECT_EQ(flip(rotate60(flip(rotate60(v)))), v);
  }
}

TEST(HexmathProperty, TwelveDistinctOrientations) {
  HexVec v{1, 3};
  std::set<HexVec> images;
  for (Orientation o : all_orientations()) images.insert(apply(o, v));
  EXPECT_EQ(images.size(), 12u);
}

TEST(HexmathProperty, DirApplyMatchesVectorApply) {
  for (Orientation o : all_orientations())
    for (Dir d = 0; d < 6; ++d) EXPECT_EQ(ring(dir_apply(o, d)), apply(o, ring(d))) << o.rot << o.flip << d;
}

TEST(HexmathProperty, DirSetTransformPreservesSize) {
  for (unsigned bits = 0; bits < 64; ++bits) {
    DirSet s(static_cast<std::uint8_t>(bits));
    for (Orientation o : all_orientations()) {
      DirSet t = s.transformed(o);
      EXPECT_EQ(t.size(), s.size());
      for (Dir d = 0; d < 6; ++d) EXPECT_EQ(t.contains(dir_apply(o, d)), s.contains(d));
    }
  }
}
