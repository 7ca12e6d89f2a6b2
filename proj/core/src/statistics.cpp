#include "netcatalyst/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace netcatalyst {

double stat_edges(const Graph& g) { return static_cast<double>(g.edge_count()); }

double stat_triangles(const Graph& g) {
  std::size_t closed = 0;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    g.for_each_neighbor(i, [&](NodeIndex j) {
      if (j > i) closed += g.shared_partners(i, j);
    });
  }
  return static_cast<double>(closed) / 3.0;
}

double node_triangles(const Graph& g, NodeIndex i) {
  std::size_t closed = 0;
  g.for_each_neighbor(i, [&](NodeIndex j) { closed += g.shared_partners(i, j); });
  return static_cast<double>(closed) / 2.0;
}

std::vector<double> degree_distribution(const Graph& g) {
  std::vector<double> dist(g.size(), 0.0);
  for (NodeIndex i = 0; i < g.size(); ++i) dist[g.degree(i)] += 1.0;
  return dist;
}

std::vector<double> esp_distribution(const Graph& g) {
  std::vector<double> dist(g.size() < 2 ? 0 : g.size() - 1, 0.0);
  for (NodeIndex i = 0; i < g.size(); ++i) {
    g.for_each_neighbor(i, [&](NodeIndex j) {
      if (j > i) dist[g.shared_partners(i, j)] += 1.0;
    });
  }
  return dist;
}

TriadCensus triad_census(const Graph& g) {
  const double n = static_cast<double>(g.size());
  const double triples = n * (n - 1) * (n - 2) / 6.0;
  std::size_t triangle_corners = 0;  // 3 per triangle
  double one_edge = 0.0;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    g.for_each_neighbor(i, [&](NodeIndex j) {
      if (j <= i) return;
      const std::size_t sp = g.shared_partners(i, j);
      triangle_corners += sp;
      // Third nodes adjacent to neither endpoint.
      const std::size_t touched = (g.degree(i) - 1) + (g.degree(j) - 1) - sp;
      one_edge += static_cast<double>(g.size() - 2 - touched);
    });
  }
  const double triangles = static_cast<double>(triangle_corners) / 3.0;
  double wedges = 0.0;
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const double d = static_cast<double>(g.degree(i));
    wedges += d * (d - 1) / 2.0;
  }
  const double two_path = wedges - 3.0 * triangles;
  const double empty = triples - one_edge - two_path - triangles;
  return {empty, one_edge, two_path, triangles};
}

double geometric_increment(std::size_t k, double decay) {
  return std::pow(-std::expm1(-decay), static_cast<double>(k));
}

double geometric_weight(std::size_t k, double decay) {
  if (k == 0) return 0.0;
  return std::exp(decay) * (1.0 - geometric_increment(k, decay));
}

namespace {

double geometric_sum(const std::vector<double>& dist, double decay) {
  double total = 0.0;
  for (std::size_t k = 1; k < dist.size(); ++k) {
    if (dist[k] != 0.0) total += geometric_weight(k, decay) * dist[k];
  }
  return total;
}

std::vector<double> truncate(const std::vector<double>& dist, std::size_t max_k) {
  std::vector<double> out(max_k + 1, 0.0);
  for (std::size_t k = 0; k < dist.size(); ++k) out[std::min(k, max_k)] += dist[k];
  return out;
}

}  // namespace

double stat_gwdegree(const Graph& g, double decay) {
  return geometric_sum(degree_distribution(g), decay);
}

double stat_gwesp(const Graph& g, double decay) {
  return geometric_sum(esp_distribution(g), decay);
}

AuxStats aux_statistics(const Graph& g, std::size_t max_k) {
  if (g.size() == 0 || max_k > g.size() - 1) {
    throw std::invalid_argument("aux_statistics: max_k " + std::to_string(max_k) +
                                " exceeds n - 1 for n = " + std::to_string(g.size()));
  }
  AuxStats out;
  out.degree = truncate(degree_distribution(g), max_k);
  out.esp = truncate(esp_distribution(g), max_k);
  out.triads = triad_census(g);
  return out;
}

}  // namespace netcatalyst
