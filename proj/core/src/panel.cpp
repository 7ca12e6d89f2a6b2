#include "netcatalyst/panel.hpp"

namespace netcatalyst {

ActiveMask Panel::period_active(std::size_t period) const {
  if (period + 1 >= waves.size()) throw PanelError("period " + std::to_string(period) + " out of range");
  ActiveMask active(size(), 0);
  for (NodeIndex v = 0; v < size(); ++v) active[v] = present(v, period + 1) ? 1 : 0;
  return active;
}

Graph Panel::period_start(std::size_t period) const {
  const ActiveMask active = period_active(period);
  const Graph& from = waves[period];
  Graph g(size());
  for (NodeIndex i = 0; i < size(); ++i) {
    for (NodeIndex j = i + 1; j < size(); ++j) {
      if (!active[i] || !active[j]) {
        g.forbid(i, j);
      } else if (from.has_edge(i, j)) {
        g.flip(i, j);
      }
    }
  }
  return g;
}

void Panel::apply_composition() {
  for (std::size_t w = 0; w < waves.size(); ++w) {
    for (NodeIndex v = 0; v < size(); ++v) {
      if (present(v, w)) continue;
      if (waves[w].degree(v) != 0) {
        throw PanelError("node '" + ids[v] + "' has ties in wave " + std::to_string(w + 1) +
                         " where it is absent");
      }
      waves[w].forbid_node(v);
    }
  }
}

void Panel::validate() const {
  if (waves.size() < 2) throw PanelError("a panel needs at least two waves");
  if (attributes.size() != waves.size()) throw PanelError("one attribute table per wave is required");
  if (entry.size() != size() || exit.size() != size()) throw PanelError("composition does not cover the roster");
  for (std::size_t w = 0; w < waves.size(); ++w) {
    if (waves[w].size() != size()) throw PanelError("wave " + std::to_string(w + 1) + " has the wrong node count");
    if (attributes[w].size() != size()) {
      throw PanelError("attributes of wave " + std::to_string(w + 1) + " have the wrong node count");
    }
  }
  for (NodeIndex v = 0; v < size(); ++v) {
    if (entry[v] > exit[v]) throw PanelError("node '" + ids[v] + "' exits before it enters");
    for (std::size_t w = 0; w < waves.size(); ++w) {
      if (present(v, w)) continue;
      if (waves[w].degree(v) != 0) {
        throw PanelError("node '" + ids[v] + "' has ties in wave " + std::to_string(w + 1) +
                         " where it is absent");
      }
    }
  }
}

Panel Panel::from_waves(std::vector<Graph> waves, const NodeAttributes& attrs,
                        std::vector<std::string> ids) {
  Panel p;
  const std::size_t n = waves.empty() ? 0 : waves.front().size();
  if (ids.empty()) {
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  p.ids = std::move(ids);
  p.attributes.assign(waves.size(), attrs);
  p.waves = std::move(waves);
  p.entry.assign(n, 0);
  p.exit.assign(n, p.waves.empty() ? 0 : p.waves.size() - 1);
  return p;
}

}  // namespace netcatalyst
