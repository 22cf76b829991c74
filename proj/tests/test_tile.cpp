#include <gtest/gtest.h>

#include <drsa/gadgets.hpp>

using namespace drsa;

namespace {

coord_t cost(GadgetKind k, const GadgetParams& p, const std::string& par, FillerRole r = FillerRole::none) {
  auto row = verify_gadget(k, p, par, r);
  EXPECT_TRUE(row.feasible) << to_string(k) << ' ' << par;
  return row.dp;
}

TEST(TileDP, VariableAtTen) {
  GadgetParams p{10, 4, 5};
  EXPECT_EQ(cost(GadgetKind::variable, p, "**"), 45);
  EXPECT_EQ(cost(GadgetKind::variable, p, "10"), 45);
  EXPECT_EQ(cost(GadgetKind::variable, p, "01"), 45);
  EXPECT_FALSE(verify_gadget(GadgetKind::variable, p, "11").feasible);
}

TEST(TileDP, ConnectionAtTen) {
  GadgetParams p{10, 4, 5};
  EXPECT_EQ(cost(GadgetKind::connection_h, p, "11"), 42);
  EXPECT_EQ(cost(GadgetKind::connection_h, p, "00"), 48);
  EXPECT_EQ(cost(GadgetKind::connection_v, p, "11"), 42);
  EXPECT_EQ(cost(GadgetKind::connection_v, p, "00"), 48);
}

TEST(TileDP, ClauseAtTen) {
  GadgetParams p{10, 4, 5};
  EXPECT_EQ(cost(GadgetKind::clause, p, "11*"), 69);
  EXPECT_EQ(cost(GadgetKind::clause, p, "10*"), 70);
  EXPECT_EQ(cost(GadgetKind::clause, p, "01*"), 70);
  EXPECT_EQ(cost(GadgetKind::clause, p, "00*"), 75);
}

TEST(TileDP, ClausePenaltyFollowsBeta) {
  for (int beta : {1, 4, 9}) {
    GadgetParams p{8, beta, 5};
    EXPECT_EQ(cost(GadgetKind::clause, p, "00*") - cost(GadgetKind::clause, p, "11*"), 2 + beta);
  }
}

TEST(TileDP, CrossingIsTwoPasses) {
  for (coord_t a : {4, 7}) {
    GadgetParams p{a, 4, 5};
    for (auto& row : gadget_table(GadgetKind::crossing, p)) {
      ASSERT_TRUE(row.lemma);
      EXPECT_EQ(row.dp, *row.lemma) << row.parities;
    }
  }
}

// A wire can turn false into true only through the splitter penalty; a
// connection never flips 0 to 1.
TEST(TileDP, ConnectionKeepsParity) {
  GadgetParams p{6, 4, 5};
  EXPECT_FALSE(verify_gadget(GadgetKind::connection_h, p, "01").feasible);
  auto r = solve_tile_levels(to_problem(sample_tile(GadgetKind::connection_h, p), parse_parities("01")));
  EXPECT_EQ(r.status, Status::no_connection);
}

TEST(TileDP, ConnectionMonotone) {
  for (coord_t a = 4; a <= 12; ++a) {
    GadgetParams p{a, 4, 5};
    coord_t c0 = cost(GadgetKind::connection_h, p, "0*"), c1 = cost(GadgetKind::connection_h, p, "1*");
    EXPECT_GE(c0, c1);
    EXPECT_EQ(c0 - c1, 6);
  }
}

// Measured penalties of this splitter geometry: parity 0 throughout costs
// min(gamma+5, 9) more than parity 1, a forbidden flip costs gamma+1 more.
TEST(TileDP, SplitterPenalties) {
  for (int gamma : {2, 3, 5, 7}) {
    for (coord_t a : {4, 6}) {
      GadgetParams p{a, 4, gamma};
      for (auto k : {GadgetKind::splitter_h, GadgetKind::splitter_v}) {
        coord_t base = cost(k, p, "111");
        EXPECT_EQ(base, 6 * a + gamma + 3);
        EXPECT_EQ(cost(k, p, "000") - base, std::min(gamma + 5, 9));
        EXPECT_EQ(cost(k, p, "011") - base, gamma + 1);
      }
    }
  }
}

TEST(TileDP, AlphaMin) { EXPECT_EQ(find_alpha_min(), 4); }

TEST(TileDP, FormulaDeltasDoNotDependOnAlpha) {
  for (auto k : {GadgetKind::variable, GadgetKind::connection_h, GadgetKind::clause, GadgetKind::splitter_h}) {
    auto a = gadget_table(k, {4, 4, 5});
    auto b = gadget_table(k, {9, 4, 5});
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].delta(), b[i].delta()) << a[i].kind << a[i].parities;
  }
}

// The subset DP and the level DP solve the same problem.
TEST(TileDP, SubsetAndLevelAgree) {
  std::vector<std::pair<GadgetKind, FillerRole>> kinds = {
      {GadgetKind::variable, FillerRole::none},       {GadgetKind::connection_h, FillerRole::none},
      {GadgetKind::connection_v, FillerRole::none},   {GadgetKind::crossing, FillerRole::none},
      {GadgetKind::clause, FillerRole::none},         {GadgetKind::splitter_h, FillerRole::none},
      {GadgetKind::splitter_v, FillerRole::none},     {GadgetKind::root_filler, FillerRole::merge_down},
      {GadgetKind::root_filler, FillerRole::merge_left}, {GadgetKind::root_filler, FillerRole::corner_down},
      {GadgetKind::root_filler, FillerRole::corner_left},
  };
  GadgetParams p{4, 2, 3};
  for (auto [k, r] : kinds) {
    auto tile = sample_tile(k, p, r);
    for (auto& par : parity_table(k, r)) {
      auto prob = to_problem(tile, parse_parities(par));
      auto lv = solve_tile_levels(prob);
      auto ss = solve_tile_branching(prob);
      ASSERT_EQ(lv.status, ss.status) << to_string(k) << '/' << to_string(r) << ' ' << par;
      if (lv) {
        EXPECT_EQ(lv.value.length, ss.value.length) << to_string(k) << '/' << to_string(r) << ' ' << par;
      }
    }
  }
}

TEST(TileDP, BranchingIsConsistent) {
  GadgetParams p{5, 4, 5};
  for (auto k : {GadgetKind::variable, GadgetKind::clause, GadgetKind::splitter_h, GadgetKind::crossing}) {
    auto tile = sample_tile(k, p);
    for (auto& par : parity_table(k)) {
      auto prob = to_problem(tile, parse_parities(par));
      auto r = solve_tile_levels(prob);
      if (!r) continue;
      const auto& br = r.value;
      coord_t len = 0;
      std::vector<int> seen(prob.terminals.size(), 0);
      for (const auto& n : br.nodes) {
        if (n.kind == BranchNode::terminal) {
          ++seen[n.ref];
          EXPECT_EQ(n.pos, prob.terminals[n.ref].pos);
          EXPECT_EQ(n.depth, prob.terminals[n.ref].depth);
        }
        if (n.parent < 0) continue;
        const auto& up = br.nodes[n.parent];
        EXPECT_TRUE(dominated(up.pos, n.pos));
        EXPECT_EQ(n.depth, up.depth + 1);
        len += l1(n.pos, up.pos);
      }
      EXPECT_EQ(len, br.length);
      for (int s : seen) EXPECT_EQ(s, 1);
      ASSERT_EQ(br.roots.size(), tile.outputs().size());
      for (std::size_t i = 0; i < prob.ports.size(); ++i)
        if (prob.ports[i].parity >= 0) {
          EXPECT_EQ(br.port_parity[i], prob.ports[i].parity);
        }
    }
  }
}

TEST(TileDP, TransposeIsSymmetric) {
  GadgetParams p{6, 4, 5};
  auto h = gadget_table(GadgetKind::splitter_h, p);
  auto v = gadget_table(GadgetKind::splitter_v, p);
  ASSERT_EQ(h.size(), v.size());
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_EQ(h[i].dp, v[i].dp);
}

TEST(TileDP, ParityStringMustFit) {
  EXPECT_THROW(verify_gadget(GadgetKind::clause, {6, 4, 5}, "11"), Error);
}

}  // namespace
