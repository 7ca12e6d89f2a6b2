#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "netcatalyst/panel.hpp"

using namespace netcatalyst;

namespace {

// Node 3 enters at wave 1, node 0 leaves after wave 1.
Panel churn() {
  Panel p;
  p.ids = {"a", "b", "c", "d"};
  p.waves = {fixtures::make(4, {{0, 1}, {1, 2}}), fixtures::make(4, {{0, 1}, {2, 3}}), fixtures::make(4, {{1, 3}})};
  p.attributes.assign(3, NodeAttributes(4));
  p.entry = {0, 0, 0, 1};
  p.exit = {1, 2, 2, 2};
  p.apply_composition();
  return p;
}

}  // namespace

TEST(Panel, FromWaves) {
  const Panel p = Panel::from_waves({fixtures::k3(), fixtures::path3()}, NodeAttributes(3));
  EXPECT_EQ(p.period_count(), 1u);
  EXPECT_EQ(p.ids, (std::vector<std::string>{"0", "1", "2"}));
  EXPECT_NO_THROW(p.validate());
}

TEST(Panel, CompositionForbidsAbsentPairs) {
  const Panel p = churn();
  EXPECT_TRUE(p.waves[0].is_forbidden(3, 1));
  EXPECT_FALSE(p.waves[1].is_forbidden(3, 1));
  EXPECT_TRUE(p.waves[2].is_forbidden(0, 1));
  EXPECT_NO_THROW(p.validate());
}

TEST(Panel, PeriodActorsAndStartStates) {
  const Panel p = churn();
  EXPECT_EQ(p.period_active(0), (ActiveMask{1, 1, 1, 1}));
  EXPECT_EQ(p.period_active(1), (ActiveMask{0, 1, 1, 1}));
  // The leaver's ties are dropped from the start of the period it is absent for.
  const Graph start = p.period_start(1);
  EXPECT_FALSE(start.has_edge(0, 1));
  EXPECT_TRUE(start.has_edge(2, 3));
  EXPECT_TRUE(start.is_forbidden(0, 2));
  // The joiner starts period 0 with an empty row and may be chosen.
  EXPECT_EQ(p.period_start(0).degree(3), 0u);
  EXPECT_FALSE(p.period_start(0).is_forbidden(3, 1));
}

TEST(Panel, ValidationErrors) {
  Panel one = Panel::from_waves({fixtures::k3(), fixtures::k3()}, NodeAttributes(3));
  one.waves.pop_back();
  one.attributes.pop_back();
  EXPECT_THROW(one.validate(), PanelError);

  Panel sizes = Panel::from_waves({fixtures::k3(), fixtures::k3()}, NodeAttributes(3));
  sizes.waves[1] = Graph(4);
  EXPECT_THROW(sizes.validate(), PanelError);

  Panel order = churn();
  order.entry[3] = 2;
  order.exit[3] = 1;
  EXPECT_THROW(order.validate(), PanelError);

  Panel tie;
  tie.ids = {"a", "b"};
  tie.waves = {fixtures::make(2, {{0, 1}}), fixtures::make(2, {{0, 1}})};
  tie.attributes.assign(2, NodeAttributes(2));
  tie.entry = {1, 0};
  tie.exit = {1, 1};
  EXPECT_THROW(tie.apply_composition(), PanelError);
}
