#ifndef NETCATALYST_STATISTICS_HPP_
#define NETCATALYST_STATISTICS_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "netcatalyst/graph.hpp"

namespace netcatalyst {

/// Undirected triad classes: 0, 1, 2 or 3 edges among the three nodes.
enum class TriadClass : std::size_t { empty = 0, one_edge = 1, two_path = 2, triangle = 3 };

using TriadCensus = std::array<double, 4>;

/// Degree, edgewise-shared-partner and triad-census distributions.
struct AuxStats {
  std::vector<double> degree;  ///< degree[k] = nodes with degree k; last bin pools the tail
  std::vector<double> esp;     ///< esp[k] = edges with k shared partners; last bin pools the tail
  TriadCensus triads{};
};

double stat_edges(const Graph& g);
double stat_triangles(const Graph& g);

/// Number of triangles containing node i.
double node_triangles(const Graph& g, NodeIndex i);

/// D_k for k = 0..n-1.
std::vector<double> degree_distribution(const Graph& g);
/// EP_k for k = 0..n-2 (empty for n < 2).
std::vector<double> esp_distribution(const Graph& g);
TriadCensus triad_census(const Graph& g);

/// Weight e^decay * (1 - (1 - e^-decay)^k) applied to the k-th bin of the
/// geometrically weighted statistics. Zero at k = 0.
double geometric_weight(std::size_t k, double decay);

/// (1 - e^-decay)^k, the increment of geometric_weight from k to k + 1.
double geometric_increment(std::size_t k, double decay);

double stat_gwdegree(const Graph& g, double decay);
double stat_gwesp(const Graph& g, double decay);

/// Distributions truncated at max_k with the tail mass pooled in bin max_k.
/// Requires max_k <= n - 1.
AuxStats aux_statistics(const Graph& g, std::size_t max_k);

}  // namespace netcatalyst

#endif  // NETCATALYST_STATISTICS_HPP_
