#ifndef NETCATALYST_GENERATORS_HPP_
#define NETCATALYST_GENERATORS_HPP_

#include <cstddef>
#include <cstdint>

#include "netcatalyst/attributes.hpp"
#include "netcatalyst/graph.hpp"
#include "netcatalyst/panel.hpp"
#include "netcatalyst/random.hpp"
#include "netcatalyst/saom.hpp"

namespace netcatalyst {

/// Barabasi-Albert growth from a complete seed graph on m nodes. Each new
/// node draws m distinct partners proportionally to their degree before it
/// arrived. Requires 1 <= m < n.
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Uniform graph with exactly `edges` edges (G(n, M)).
Graph generate_er(std::size_t n, std::size_t edges, std::uint64_t seed);

/// Adds `count` uniformly chosen absent, non-forbidden pairs to g.
void add_random_edges(Graph& g, std::size_t count, Rng& rng);

/// Three-wave pseudo-panel of one BA growth process snapshotted at n/2,
/// 3n/4 and n nodes. Later arrivals enter at the first wave that contains
/// them; nobody leaves.
Panel ba_panel(std::size_t n, std::size_t m, std::uint64_t seed);

/// Same roster, composition and per-wave edge counts as `reference`, but
/// each wave adds uniformly random pairs among present nodes to the last.
Panel matched_er_panel(const Panel& reference, std::uint64_t seed);

/// Waves x0, x1, ... with x_{m+1} simulated from x_m at spec.rates[m].
Panel simulate_panel(const Graph& x0, const saom::Spec& spec, const NodeAttributes& attrs,
                     std::uint64_t seed);

}  // namespace netcatalyst

#endif  // NETCATALYST_GENERATORS_HPP_
