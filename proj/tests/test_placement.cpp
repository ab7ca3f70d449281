#include <gtest/gtest.h>

#include <random>

#include "hexlink/table.hpp"
#include "oracle.hpp"

using namespace hexlink;

namespace {

struct Fixture : ::testing::Test {
  BoardMap b = builtin_board();
  PieceSet ps = builtin_pieces();

  int id(const char* name) const { return *ps.index_of(name); }

  std::vector<Placement> all_of(int piece) const {
    Occupancy empty(b, ps);
    return enumerate_legal(b, ps, empty, PieceMask{1} << piece);
  }
};

using PlacementTest = Fixture;

}  // namespace

TEST_F(PlacementTest, ResolveStraightAtRowEnd) {
  auto in = resolve(b, ps, {id("light_green"), 0, {0, false}});
  ASSERT_TRUE(in);
  EXPECT_EQ((*in)[0].spot, 0);
  EXPECT_EQ((*in)[1].spot, 1);
  EXPECT_EQ((*in)[2].spot, 2);
  EXPECT_FALSE(resolve(b, ps, {id("light_green"), 5, {0, false}}));
  EXPECT_FALSE(resolve(b, ps, {id("light_green"), 0, {3, false}}));
}

TEST_F(PlacementTest, EmptyBoardCounts) {
  std::map<std::string, int> expect{{"light_purple", 72}, {"light_green", 144}, {"aqua", 144}};
  for (const auto& p : ps) {
    int n = static_cast<int>(all_of(*ps.index_of(p.name)).size());
    int want = expect.count(p.name) ? expect[p.name] : p.family == Family::obtuse ? 152 : 180;
    EXPECT_EQ(n, want) << p.name;
    // independent count over all 12 orientations with pose deduplication
    EXPECT_EQ(static_cast<int>(oracle::poses(b, ps, *ps.index_of(p.name)).size()), want) << p.name;
  }
}

TEST_F(PlacementTest, FullBoardLeavesNothing) {
  Occupancy occ(b, ps);
  EXPECT_EQ(enumerate_legal(b, ps, occ, 0).size(), 0u);
}

TEST_F(PlacementTest, PlaceRemoveInverse) {
  Occupancy occ(b, ps);
  Occupancy before = occ;
  Placement p{id("yellow"), 0, {2, true}};
  while (!resolve(b, ps, p)) ++p.anchor;
  occ.place(p);
  EXPECT_FALSE(occ == before);
  occ.remove(p);
  EXPECT_TRUE(occ == before);
  EXPECT_THROW(occ.remove(p), NotPresent);
}

TEST_F(PlacementTest, IncompatiblePlaceIsAtomic) {
  Occupancy occ(b, ps);
  occ.place({id("light_green"), 0, {0, false}});
  Occupancy snapshot = occ;
  // red's first ball lands on spot 0, already holding a ball
  EXPECT_THROW(occ.place({id("red"), 0, {0, false}}), IncompatiblePlacement);
  EXPECT_TRUE(occ == snapshot);
  EXPECT_THROW(occ.place({id("light_green"), 12, {0, false}}), IncompatiblePlacement);
  EXPECT_THROW(occ.place({id("orange"), 5, {0, false}}), IncompatiblePlacement);
  EXPECT_TRUE(occ == snapshot);
}

TEST_F(PlacementTest, TwoBallsOnOneSpot) {
  Occupancy occ(b, ps);
  occ.place({id("light_green"), 0, {0, false}});
  auto r = resolve(b, ps, {id("red"), 0, {0, false}});
  ASSERT_TRUE(r);
  EXPECT_FALSE(occ.compatible(*r));
}

// Mating is decided by arms and openings alone; brute force over every pair
// of placements that share exactly one spot as ball and ring.
TEST_F(PlacementTest, MatingRuleExhaustive) {
  int mated = 0, refused = 0, elbow_refused = 0, elbow_mated = 0;
  for (int i = 0; i < ps.size(); ++i)
    for (int j = 0; j < ps.size(); ++j) {
      if (i == j) continue;
      for (const Placement& p : all_of(i)) {
        Occupancy occ(b, ps);
        occ.place(p);
        for (const Placement& q : all_of(j)) {
          auto rp = *resolve(b, ps, p);
          auto rq = *resolve(b, ps, q);
          int shared = 0;
          const ElementAt *ball = nullptr, *ring = nullptr;
          bool other = false;
          for (const auto& x : rp)
            for (const auto& y : rq)
              if (x.spot == y.spot) {
                ++shared;
                if (x.kind == Element::Kind::ball && y.kind == Element::Kind::socket) ball = &x, ring = &y;
                else if (x.kind == Element::Kind::socket && y.kind == Element::Kind::ball) ball = &y, ring = &x;
                else other = true;
              }
          if (shared != 1 || other || !ball) continue;
          bool arms_fit = true;
          for (Dir d = 0; d < 6; ++d)
            if (ball->arms.contains(d) && !ring->openings.contains(d)) arms_fit = false;
          bool expect = arms_fit && (!ball->elbow || ring->accepts_elbow);
          EXPECT_EQ(occ.compatible(q), expect);
          if (expect) {
            ++mated;
            if (ball->elbow) ++elbow_mated;
          } else {
            ++refused;
            if (ball->elbow && arms_fit) ++elbow_refused;
          }
        }
      }
    }
  EXPECT_GT(mated, 0);
  EXPECT_GT(refused, 0);
  EXPECT_GT(elbow_refused, 0);  // elbow ball in a non-accepting ring
  EXPECT_GT(elbow_mated, 0);    // only the accepting socket takes it
}

TEST_F(PlacementTest, MatedPairFillsBothHalves) {
  // find any compatible pair sharing a spot
  for (const Placement& p : all_of(id("light_green")))
    for (const Placement& q : all_of(id("yellow"))) {
      Occupancy occ(b, ps);
      occ.place(p);
      if (!occ.compatible(q)) continue;
      auto rp = *resolve(b, ps, p);
      auto rq = *resolve(b, ps, q);
      bool share = false;
      for (const auto& x : rp)
        for (const auto& y : rq) share |= x.spot == y.spot;
      if (!share) continue;
      occ.place(q);
      auto pairs = mated_pairs(occ);
      ASSERT_EQ(pairs.size(), 1u);
      EXPECT_EQ(link_components(occ), 1);
      bool found = false;
      for (SpotId s = 0; s < b.size(); ++s)
        if (occ.inside(s).state == Occupancy::Inside::State::ball &&
            occ.outside(s).state == Occupancy::Outside::State::ring && occ.inside(s).owner != occ.outside(s).owner)
          found = true;
      EXPECT_TRUE(found);
      return;
    }
  FAIL() << "no mating pair found";
}

TEST_F(PlacementTest, CirclesNeverMate) {
  // a circle shares no spot with anything, so it can only link through its
  // ball or socket
  for (int i = 0; i < ps.size(); ++i)
    for (const Placement& p : all_of(i)) {
      Occupancy occ(b, ps);
      occ.place(p);
      auto rp = *resolve(b, ps, p);
      for (const auto& e : rp) {
        if (e.kind != Element::Kind::circle) continue;
        EXPECT_EQ(occ.inside(e.spot).state, Occupancy::Inside::State::circle);
        EXPECT_EQ(occ.outside(e.spot).state, Occupancy::Outside::State::circle);
      }
    }
}

TEST_F(PlacementTest, DisconnectedLayout) {
  Occupancy occ(b, ps);
  occ.place({id("light_green"), 0, {0, false}});
  occ.place({id("aqua"), 21, {0, false}});
  EXPECT_TRUE(mated_pairs(occ).empty());
  EXPECT_EQ(link_components(occ), 2);
}

TEST_F(PlacementTest, Linkable) {
  Occupancy occ(b, ps);
  for (const Placement& p : all_of(id("red"))) EXPECT_TRUE(linkable(p, occ));
  Placement g{id("light_green"), 0, {0, false}};
  occ.place(g);
  EXPECT_FALSE(linkable({id("aqua"), 21, {0, false}}, occ));
  int links = 0;
  for (const Placement& q : enumerate_legal(b, ps, occ, all_pieces_mask(ps)))
    if (linkable(q, occ)) {
      ++links;
      Occupancy o2 = occ;
      o2.place(q);
      EXPECT_EQ(link_components(o2), 1);
    }
  EXPECT_GT(links, 0);
}

TEST_F(PlacementTest, UselessFilterTopEdge) {
  int lp = id("light_purple");
  auto all = all_of(lp);
  auto kept = useless_filter(b, ps, all, true);
  // openings point up (dirs 1, 2), so along the top row they lead off the board
  for (SpotId a = 0; a <= 3; ++a) {
    Placement p{lp, a, {0, false}};
    EXPECT_FALSE(classify_useless(b, ps, p, {}));
  }
  auto disabled = useless_filter(b, ps, all, false);
  ASSERT_EQ(disabled.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(disabled[i].placement, all[i]);
  // other pieces pass through
  auto green = all_of(id("light_green"));
  EXPECT_EQ(useless_filter(b, ps, green, true).size(), green.size());

  // oracle: walk each opening by lattice arithmetic
  std::size_t useful = 0;
  for (const Placement& p : all) {
    auto off = canonical_offsets(Family::straight);
    HexVec origin = b.position(p.anchor);
    HexVec mid = origin + apply(p.orient, off[1]);
    bool any = false;
    for (Dir d : {1, 2}) {
      HexVec t = mid + apply(p.orient, ring(d));
      bool own = false;
      for (auto o : off) own |= (origin + apply(p.orient, o)) == t;
      if (b.spot_at(t) && !own) any = true;
    }
    useful += any;
  }
  EXPECT_EQ(kept.size(), useful);
  EXPECT_LT(kept.size(), all.size());
}

TEST_F(PlacementTest, MirrorCanonicalization) {
  int lp = id("light_purple");
  for (const Placement& p : all_of(lp)) {
    auto r = *resolve(b, ps, p);
    for (SpotId a = 0; a < b.size(); ++a)
      for (int rot = 0; rot < 6; ++rot) {
        Placement f{lp, a, {rot, true}};
        auto rf = resolve(b, ps, f);
        if (!rf || !same_pose(r, *rf)) continue;
        EXPECT_EQ(canonicalize(b, ps, f), p);
      }
  }
}

TEST_F(PlacementTest, ParsePlacementGrammar) {
  auto lines = detail::tokenize("dark_blue anchor=7 rot=3 flip=1\n");
  Placement p = parse_placement(ps, b, lines[0]);
  EXPECT_EQ(p, (Placement{id("dark_blue"), 7, {3, true}}));
  EXPECT_EQ(format_placement(ps, p), "dark_blue anchor=7 rot=3 flip=1");
  auto bad = [&](const char* text) { return parse_placement(ps, b, detail::tokenize(text)[0]); };
  EXPECT_THROW(bad("mauve anchor=0 rot=0 flip=0"), ParseError);
  EXPECT_THROW(bad("red anchor=24 rot=0 flip=0"), ParseError);
  EXPECT_THROW(bad("red anchor=0 rot=6 flip=0"), ParseError);
  EXPECT_THROW(bad("red anchor=0 rot=0 flip=2"), ParseError);
  EXPECT_THROW(bad("red anchor=0 rot=0"), ParseError);
  EXPECT_THROW(bad("red rot=0 anchor=0 flip=0"), ParseError);
}

TEST(Table, RowsAgreeWithOccupancy) {
  BoardMap b = builtin_board();
  PieceSet ps = builtin_pieces();
  PlacementTable t(b, ps);
  EXPECT_EQ(t.placement_count(), 1840);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, t.bits() - 1);
  int checked = 0;
  while (checked < 4000) {
    int i = pick(rng), j = pick(rng);
    if (!t.valid(i) || !t.valid(j)) continue;
    ++checked;
    bool compat = t.compatible_with(i).test(j);
    EXPECT_EQ(compat, t.compatible_with(j).test(i));
    Occupancy occ(b, ps);
    occ.place(t.placement(i));
    EXPECT_EQ(compat, occ.compatible(t.placement(j)));
    if (compat && t.piece_of(i) != t.piece_of(j)) {
      occ.place(t.placement(j));
      EXPECT_EQ(t.mates_with(i).test(j), !mated_pairs(occ).empty());
    } else {
      EXPECT_FALSE(t.mates_with(i).test(j));
    }
  }
  for (int i = 0; i < t.bits(); ++i)
    if (t.valid(i)) {
      EXPECT_EQ(t.index_of(t.placement(i)), i);
    }
}
