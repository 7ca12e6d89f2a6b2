#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "netcatalyst/generators.hpp"
#include "netcatalyst/gof.hpp"

using namespace netcatalyst;

namespace {

EstimationResult fit_with(std::vector<double> estimates) {
  EstimationResult r;
  r.estimates = std::move(estimates);
  r.converged = true;
  return r;
}

std::vector<AuxStats> ensemble(std::size_t count, std::uint64_t seed) {
  std::vector<AuxStats> out;
  for (std::size_t r = 0; r < count; ++r) out.push_back(aux_statistics(fixtures::random_graph(12, 0.3, seed + r), 8));
  return out;
}

// Disjoint 4-cliques: as transitive as a sparse graph gets.
Graph cliques(std::size_t groups) {
  Graph g(4 * groups);
  for (std::size_t c = 0; c < groups; ++c) {
    for (NodeIndex i = 0; i < 4; ++i) {
      for (NodeIndex j = i + 1; j < 4; ++j) g.flip(4 * c + i, 4 * c + j);
    }
  }
  return g;
}

const gof::Bin& find(const gof::GofReport& r, const std::string& family, const std::string& label) {
  for (const auto& b : r.bins) {
    if (b.family == family && b.label == label) return b;
  }
  throw std::out_of_range(family + " " + label);
}

}  // namespace

TEST(BandReport, BandsAreOrderedAndFlagsConsistent) {
  const auto sims = ensemble(60, 1);
  const auto r = gof::band_report(aux_statistics(fixtures::random_graph(12, 0.3, 999), 8), sims, 0.95, "test");
  EXPECT_EQ(r.nsims, 60u);
  EXPECT_EQ(r.families(), (std::vector<std::string>{"degree", "esp", "triad"}));
  EXPECT_EQ(r.bins.size(), 9u + 9u + 4u);
  for (const auto& b : r.bins) {
    EXPECT_LE(b.lo, b.median);
    EXPECT_LE(b.median, b.hi);
    EXPECT_EQ(b.inside, b.lo <= b.observed && b.observed <= b.hi);
  }
}

TEST(BandReport, ObservedDrawIsAlwaysInside) {
  auto sims = ensemble(30, 2);
  const AuxStats observed = aux_statistics(fixtures::random_graph(12, 0.6, 77), 8);
  sims.push_back(observed);
  // With 31 draws the 95% band spans the whole ensemble.
  const auto r = gof::band_report(observed, sims, 0.95, "test");
  EXPECT_EQ(r.inside_count(), r.bins.size());
  EXPECT_EQ(r.inside_fraction(), 1.0);
}

TEST(BandReport, BandsWidenWithCoverage) {
  const auto sims = ensemble(200, 3);
  const AuxStats observed = aux_statistics(fixtures::random_graph(12, 0.3, 5), 8);
  const auto narrow = gof::band_report(observed, sims, 0.80, "test");
  const auto wide = gof::band_report(observed, sims, 0.95, "test");
  ASSERT_EQ(narrow.bins.size(), wide.bins.size());
  for (std::size_t i = 0; i < wide.bins.size(); ++i) {
    EXPECT_LE(wide.bins[i].lo, narrow.bins[i].lo);
    EXPECT_GE(wide.bins[i].hi, narrow.bins[i].hi);
    EXPECT_EQ(wide.bins[i].median, narrow.bins[i].median);
  }
}

TEST(BandReport, Labels) {
  const auto r = gof::band_report(aux_statistics(fixtures::k3(), 2), {aux_statistics(fixtures::k3(), 2)}, 0.95, "m");
  EXPECT_EQ(find(r, "triad", "triangle").observed, 1.0);
  EXPECT_EQ(find(r, "degree", "2+").observed, 3.0);
  EXPECT_EQ(find(r, "esp", "1").observed, 3.0);
  EXPECT_THROW(gof::band_report(aux_statistics(fixtures::k3(), 2), {}, 0.95, "m"), std::invalid_argument);
}

TEST(GofErgm, TooFewSimulations) {
  const auto spec = ergm::Spec::from({{ergm::EffectKind::edges}}, {0.0});
  EXPECT_THROW(gof::gof_ergm(fit_with({0.0}), spec, NodeAttributes(6), Graph(6), 0, 1), std::invalid_argument);
  EXPECT_THROW(gof::gof_ergm(fit_with({0.0}), spec, NodeAttributes(6), Graph(6), 19, 1), std::invalid_argument);
}

TEST(GofErgm, DeterministicAndThreadInvariant) {
  const auto spec = ergm::Spec::from({{ergm::EffectKind::edges}}, {-1.0});
  const Graph g = fixtures::random_graph(15, 0.25, 3);
  gof::GofOptions one;
  gof::GofOptions four;
  four.threads = 4;
  const auto a = gof::gof_ergm(fit_with({-1.0}), spec, NodeAttributes(15), g, 50, 8, one);
  const auto b = gof::gof_ergm(fit_with({-1.0}), spec, NodeAttributes(15), g, 50, 8, four);
  ASSERT_EQ(a.bins.size(), b.bins.size());
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    EXPECT_EQ(a.bins[i].lo, b.bins[i].lo);
    EXPECT_EQ(a.bins[i].median, b.bins[i].median);
    EXPECT_EQ(a.bins[i].hi, b.bins[i].hi);
  }
}

TEST(GofSaom, TooFewSimulations) {
  const auto spec = saom::Spec::from({{saom::EffectKind::density}}, {0.0}, {1.0});
  const auto panel = Panel::from_waves({fixtures::k3(), fixtures::path3()}, NodeAttributes(3));
  EXPECT_THROW(gof::gof_saom(fit_with({1.0, 0.0}), spec, panel, 0, 1), std::invalid_argument);
}

TEST(GofSaom, ZeroObjectiveMissesTransitiveData) {
  const Graph g = cliques(6);
  const auto panel = Panel::from_waves({g, g}, NodeAttributes(24));
  // transTriad forced to 0; the density term alone dissolves the cliques.
  const auto spec = saom::Spec::from({{saom::EffectKind::density}, {saom::EffectKind::trans_triad}}, {-1.0, 0.0}, {5.0});
  const auto r = gof::gof_saom(fit_with({5.0, -1.0, 0.0}), spec, panel, 100, 4);
  const auto& triangle = find(r, "triad", "triangle");
  EXPECT_EQ(triangle.observed, 24.0);
  EXPECT_FALSE(triangle.inside);
  EXPECT_LT(triangle.hi, triangle.observed);
  EXPECT_FALSE(find(r, "degree", "3").inside);
}

TEST(GofSaom, DeterministicAndThreadInvariant) {
  const auto spec = saom::Spec::from({{saom::EffectKind::density}}, {-1.0}, {2.0});
  const Graph x0 = generate_er(15, 20, 1);
  const auto panel = simulate_panel(x0, spec, NodeAttributes(15), 3);
  gof::GofOptions four;
  four.threads = 4;
  const auto a = gof::gof_saom(fit_with({2.0, -1.0}), spec, panel, 40, 9);
  const auto b = gof::gof_saom(fit_with({2.0, -1.0}), spec, panel, 40, 9, four);
  ASSERT_EQ(a.bins.size(), b.bins.size());
  for (std::size_t i = 0; i < a.bins.size(); ++i) EXPECT_EQ(a.bins[i].median, b.bins[i].median);
}
