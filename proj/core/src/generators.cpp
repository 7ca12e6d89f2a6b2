#include "netcatalyst/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netcatalyst {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t count) {
  return std::min(count - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count)));
}

}  // namespace

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) {
    throw std::invalid_argument("generate_ba: need 1 <= m < n (got n=" + std::to_string(n) +
                                ", m=" + std::to_string(m) + ")");
  }
  Rng rng = make_rng(seed);
  Graph g(n);
  for (NodeIndex i = 0; i < m; ++i) {
    for (NodeIndex j = i + 1; j < m; ++j) g.flip(i, j);
  }
  std::vector<double> weight;
  std::vector<NodeIndex> picks;
  for (NodeIndex t = m; t < n; ++t) {
    weight.assign(t, 0.0);
    double total = 0.0;
    for (NodeIndex v = 0; v < t; ++v) total += weight[v] = static_cast<double>(g.degree(v));
    picks.clear();
    for (std::size_t k = 0; k < m; ++k) {
      NodeIndex chosen = 0;
      if (total > 0.0) {
        double u = uniform01(rng) * total;
        chosen = t;
        for (NodeIndex v = 0; v < t; ++v) {
          if (weight[v] <= 0.0) continue;
          chosen = v;
          if (u < weight[v]) break;
          u -= weight[v];
        }
      } else {
        // Only reachable while every candidate is an isolate (m = 1 seed).
        std::vector<NodeIndex> left;
        for (NodeIndex v = 0; v < t; ++v) {
          if (std::find(picks.begin(), picks.end(), v) == picks.end()) left.push_back(v);
        }
        chosen = left[uniform_index(rng, left.size())];
      }
      picks.push_back(chosen);
      total -= weight[chosen];
      weight[chosen] = 0.0;
    }
    for (const NodeIndex v : picks) g.flip(t, v);
  }
  return g;
}

void add_random_edges(Graph& g, std::size_t count, Rng& rng) {
  std::vector<Dyad> open;
  for (const auto& d : g.free_pairs()) {
    if (!g.has_edge(d.first, d.second)) open.push_back(d);
  }
  if (count > open.size()) {
    throw std::invalid_argument("cannot add " + std::to_string(count) + " edges: only " +
                                std::to_string(open.size()) + " open pairs");
  }
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(open[k], open[k + uniform_index(rng, open.size() - k)]);
    g.flip(open[k].first, open[k].second);
  }
}

Graph generate_er(std::size_t n, std::size_t edges, std::uint64_t seed) {
  Graph g(n);
  Rng rng = make_rng(seed);
  add_random_edges(g, edges, rng);
  return g;
}

Panel ba_panel(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::vector<std::size_t> sizes{n / 2, 3 * n / 4, n};
  if (sizes.front() <= m) {
    throw std::invalid_argument("ba_panel: n/2 must exceed m (got n=" + std::to_string(n) +
                                ", m=" + std::to_string(m) + ")");
  }
  const Graph full = generate_ba(n, m, seed);
  Panel p;
  for (NodeIndex v = 0; v < n; ++v) p.ids.push_back("v" + std::to_string(v));
  p.entry.assign(n, 0);
  p.exit.assign(n, sizes.size() - 1);
  for (std::size_t w = 0; w < sizes.size(); ++w) {
    Graph wave(n);
    for (const auto& e : full.edges()) {
      if (e.second < sizes[w]) wave.flip(e.first, e.second);
    }
    for (NodeIndex v = sizes[w]; v < n; ++v) wave.forbid_node(v);
    p.waves.push_back(std::move(wave));
  }
  for (NodeIndex v = 0; v < n; ++v) {
    p.entry[v] = static_cast<std::size_t>(
        std::find_if(sizes.begin(), sizes.end(), [&](std::size_t s) { return v < s; }) - sizes.begin());
  }
  p.attributes.assign(sizes.size(), NodeAttributes(n));
  p.validate();
  return p;
}

Panel matched_er_panel(const Panel& reference, std::uint64_t seed) {
  reference.validate();
  Panel p = reference;
  Rng rng = make_rng(seed);
  const std::size_t n = reference.size();
  Graph current(n);
  for (std::size_t w = 0; w < reference.wave_count(); ++w) {
    Graph next(n);
    for (const auto& e : current.edges()) next.flip(e.first, e.second);
    for (NodeIndex v = 0; v < n; ++v) {
      if (!reference.present(v, w)) next.forbid_node(v);
    }
    const std::size_t target = reference.waves[w].edge_count();
    if (target < next.edge_count()) {
      throw std::invalid_argument("matched_er_panel: reference loses edges at wave " + std::to_string(w + 1));
    }
    add_random_edges(next, target - next.edge_count(), rng);
    p.waves[w] = next;
    current = std::move(next);
  }
  return p;
}

Panel simulate_panel(const Graph& x0, const saom::Spec& spec, const NodeAttributes& attrs,
                     std::uint64_t seed) {
  spec.validate();
  const saom::Evaluator ev(spec.effects, attrs);
  std::vector<Graph> waves{x0};
  for (std::size_t m = 0; m < spec.rates.size(); ++m) {
    waves.push_back(saom::simulate_period(waves.back(), spec.rates[m], spec.params, ev, {},
                                          derive_seed(seed, {m})));
  }
  return Panel::from_waves(std::move(waves), attrs);
}

}  // namespace netcatalyst
