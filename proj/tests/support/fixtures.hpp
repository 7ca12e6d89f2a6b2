#ifndef NETCATALYST_TESTS_FIXTURES_HPP_
#define NETCATALYST_TESTS_FIXTURES_HPP_

#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "netcatalyst/estimation.hpp"
#include "netcatalyst/graph.hpp"
#include "netcatalyst/random.hpp"

namespace fixtures {

using netcatalyst::Graph;
using netcatalyst::NodeIndex;

inline Graph make(std::size_t n, std::initializer_list<std::pair<NodeIndex, NodeIndex>> edges) {
  std::vector<std::pair<NodeIndex, NodeIndex>> list(edges);
  return netcatalyst::graph_from_edges(n, list);
}

inline Graph k3() { return make(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph star4() { return make(4, {{0, 1}, {0, 2}, {0, 3}}); }
inline Graph path3() { return make(3, {{0, 1}, {1, 2}}); }
/// K4 without (2, 3).
inline Graph diamond() { return make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

/// Robbins-Monro settings for comparisons against exact MLEs on tiny graphs:
/// two extra gain halvings and a long phase 2 remove the constant-gain bias
/// that the default schedule leaves at the 0.05 level.
inline netcatalyst::RmSettings precise_rm() {
  netcatalyst::RmSettings rm;
  rm.diagonalize = 0.0;
  rm.subphases = 6;
  rm.phase2_scale = 30.0;
  rm.phase3_draws = 200;
  return rm;
}

inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  netcatalyst::Rng rng = netcatalyst::make_rng(seed);
  Graph g(n);
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) {
      if (netcatalyst::uniform01(rng) < p) g.flip(i, j);
    }
  }
  return g;
}

inline std::vector<NodeIndex> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<NodeIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  netcatalyst::Rng rng = netcatalyst::make_rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(netcatalyst::uniform01(rng) * static_cast<double>(i))]);
  }
  return perm;
}

}  // namespace fixtures

#endif  // NETCATALYST_TESTS_FIXTURES_HPP_
