#include <gtest/gtest.h>

#include <algorithm>

#include "netcatalyst/generators.hpp"
#include "netcatalyst/saom.hpp"

using namespace netcatalyst;

namespace {

std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (NodeIndex i = 0; i < g.size(); ++i) best = std::max(best, g.degree(i));
  return best;
}

}  // namespace

TEST(GenerateBa, EdgeCount) {
  EXPECT_EQ(generate_ba(10, 2, 1).edge_count(), 17u);
  for (std::size_t m = 1; m < 6; ++m) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      EXPECT_EQ(generate_ba(40, m, s).edge_count(), m * (m - 1) / 2 + (40 - m) * m);
    }
  }
}

TEST(GenerateBa, SmallestRosterIsComplete) {
  for (std::size_t m = 1; m < 7; ++m) EXPECT_EQ(generate_ba(m + 1, m, 3), complete_graph(m + 1));
}

TEST(GenerateBa, Errors) {
  EXPECT_THROW(generate_ba(5, 0, 1), std::invalid_argument);
  EXPECT_THROW(generate_ba(5, 5, 1), std::invalid_argument);
}

TEST(GenerateBa, HubsBeatMatchedErdosRenyi) {
  int wins = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const Graph ba = generate_ba(500, 2, derive_seed(1, {r}));
    const Graph er = generate_er(500, ba.edge_count(), derive_seed(2, {r}));
    wins += max_degree(ba) > max_degree(er);
  }
  EXPECT_GE(wins, 95);
}

TEST(GenerateEr, ExactEdgeCountAndErrors) {
  EXPECT_EQ(generate_er(20, 57, 4).edge_count(), 57u);
  EXPECT_EQ(generate_er(6, 15, 4), complete_graph(6));
  EXPECT_THROW(generate_er(6, 16, 4), std::invalid_argument);
}

TEST(AddRandomEdges, AvoidsForbiddenAndExistingPairs) {
  Graph g(6);
  g.forbid_node(5);
  g.flip(0, 1);
  Rng rng = make_rng(3);
  add_random_edges(g, 9, rng);  // exactly the remaining open pairs among 0..4
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_EQ(g.degree(5), 0u);
  EXPECT_THROW(add_random_edges(g, 1, rng), std::invalid_argument);
}

TEST(BaPanel, SnapshotsAndComposition) {
  const Panel p = ba_panel(40, 2, 5);
  ASSERT_EQ(p.wave_count(), 3u);
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.waves[2], generate_ba(40, 2, 5));
  std::size_t present0 = 0, present1 = 0;
  for (NodeIndex v = 0; v < 40; ++v) {
    present0 += p.present(v, 0);
    present1 += p.present(v, 1);
    EXPECT_TRUE(p.present(v, 2));
  }
  EXPECT_EQ(present0, 20u);
  EXPECT_EQ(present1, 30u);
  EXPECT_EQ(p.waves[0].edge_count(), 1u + 18u * 2u);
}

TEST(MatchedErPanel, MatchesEdgeCountsAndComposition) {
  const Panel ba = ba_panel(60, 2, 8);
  const Panel er = matched_er_panel(ba, 9);
  EXPECT_NO_THROW(er.validate());
  for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(er.waves[w].edge_count(), ba.waves[w].edge_count());
  EXPECT_EQ(er.entry, ba.entry);
  EXPECT_EQ(er.exit, ba.exit);
  EXPECT_NE(er.waves[2], ba.waves[2]);
}

TEST(SimulatePanel, DeterministicAndShaped) {
  const auto spec = saom::Spec::from({{saom::EffectKind::density}}, {-1.0}, {2.0, 2.0});
  const Graph x0 = generate_er(15, 20, 1);
  const Panel a = simulate_panel(x0, spec, NodeAttributes(15), 4);
  EXPECT_EQ(a.wave_count(), 3u);
  EXPECT_EQ(a.waves[0], x0);
  EXPECT_EQ(a, simulate_panel(x0, spec, NodeAttributes(15), 4));
}
