#include "netcatalyst/graph.hpp"

#include <algorithm>

namespace netcatalyst {

SelfLoopError::SelfLoopError(NodeIndex node)
    : GraphError("self-loop on node " + std::to_string(node)) {}

NodeRangeError::NodeRangeError(NodeIndex node, std::size_t size)
    : GraphError("node " + std::to_string(node) + " out of range for graph of size " +
                 std::to_string(size)) {}

ForbiddenPairError::ForbiddenPairError(NodeIndex i, NodeIndex j)
    : GraphError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                 ") is a structural zero") {}

Graph::Graph(std::size_t n) { resize_words(n); }

void Graph::resize_words(std::size_t n) {
  n_ = n;
  words_ = (n + 63) / 64;
  adjacency_.assign(n_ * words_, 0);
  forbidden_.assign(n_ * words_, 0);
  degree_.assign(n_, 0);
  edges_ = 0;
}

void Graph::set_bit(std::vector<std::uint64_t>& bits, NodeIndex i, NodeIndex j,
                    bool value) noexcept {
  const std::uint64_t mask_ij = std::uint64_t{1} << (j % 64);
  const std::uint64_t mask_ji = std::uint64_t{1} << (i % 64);
  if (value) {
    bits[i * words_ + j / 64] |= mask_ij;
    bits[j * words_ + i / 64] |= mask_ji;
  } else {
    bits[i * words_ + j / 64] &= ~mask_ij;
    bits[j * words_ + i / 64] &= ~mask_ji;
  }
}

void Graph::check_pair(NodeIndex i, NodeIndex j) const {
  if (i >= n_) throw NodeRangeError(i, n_);
  if (j >= n_) throw NodeRangeError(j, n_);
  if (i == j) throw SelfLoopError(i);
  if (is_forbidden(i, j)) throw ForbiddenPairError(std::min(i, j), std::max(i, j));
}

void Graph::flip(NodeIndex i, NodeIndex j) noexcept {
  if (has_edge(i, j)) {
    set_bit(adjacency_, i, j, false);
    --degree_[i];
    --degree_[j];
    --edges_;
  } else {
    set_bit(adjacency_, i, j, true);
    ++degree_[i];
    ++degree_[j];
    ++edges_;
  }
}

void Graph::toggle(NodeIndex i, NodeIndex j) {
  check_pair(i, j);
  flip(i, j);
}

void Graph::add_edge(NodeIndex i, NodeIndex j) {
  check_pair(i, j);
  if (!has_edge(i, j)) flip(i, j);
}

void Graph::remove_edge(NodeIndex i, NodeIndex j) {
  check_pair(i, j);
  if (has_edge(i, j)) flip(i, j);
}

void Graph::forbid(NodeIndex i, NodeIndex j) {
  if (i >= n_) throw NodeRangeError(i, n_);
  if (j >= n_) throw NodeRangeError(j, n_);
  if (i == j) throw SelfLoopError(i);
  if (has_edge(i, j)) flip(i, j);
  set_bit(forbidden_, i, j, true);
}

void Graph::allow(NodeIndex i, NodeIndex j) {
  if (i >= n_) throw NodeRangeError(i, n_);
  if (j >= n_) throw NodeRangeError(j, n_);
  if (i == j) throw SelfLoopError(i);
  set_bit(forbidden_, i, j, false);
}

void Graph::forbid_node(NodeIndex i) {
  if (i >= n_) throw NodeRangeError(i, n_);
  for (NodeIndex j = 0; j < n_; ++j) {
    if (j != i) forbid(i, j);
  }
}

NodeIndex Graph::add_node() {
  Graph grown(n_ + 1);
  for (NodeIndex i = 0; i < n_; ++i) {
    for (NodeIndex j = i + 1; j < n_; ++j) {
      if (is_forbidden(i, j)) grown.set_bit(grown.forbidden_, i, j, true);
      if (has_edge(i, j)) grown.flip(i, j);
    }
  }
  *this = std::move(grown);
  return n_ - 1;
}

std::vector<NodeIndex> Graph::neighbors(NodeIndex i) const {
  std::vector<NodeIndex> out;
  out.reserve(degree_[i]);
  for_each_neighbor(i, [&](NodeIndex j) { out.push_back(j); });
  return out;
}

std::vector<Dyad> Graph::edges() const {
  std::vector<Dyad> out;
  out.reserve(edges_);
  for (NodeIndex i = 0; i < n_; ++i) {
    for_each_neighbor(i, [&](NodeIndex j) {
      if (j > i) out.push_back({i, j});
    });
  }
  return out;
}

std::vector<Dyad> Graph::free_pairs() const {
  std::vector<Dyad> out;
  for (NodeIndex i = 0; i < n_; ++i) {
    for (NodeIndex j = i + 1; j < n_; ++j) {
      if (!is_forbidden(i, j)) out.push_back({i, j});
    }
  }
  return out;
}

std::size_t Graph::forbidden_count() const {
  std::size_t bits = 0;
  for (const auto w : forbidden_) bits += static_cast<std::size_t>(std::popcount(w));
  return bits / 2;
}

Graph toggle_edge(const Graph& g, NodeIndex i, NodeIndex j) {
  Graph out = g;
  out.toggle(i, j);
  return out;
}

std::size_t hamming_distance(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) throw GraphError("hamming distance between graphs of different size");
  std::size_t count = 0;
  for (NodeIndex i = 0; i < a.size(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    for (std::size_t w = 0; w < ra.size(); ++w) {
      count += static_cast<std::size_t>(std::popcount(ra[w] ^ rb[w]));
    }
  }
  return count / 2;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) g.flip(i, j);
  }
  return g;
}

Graph graph_from_edges(std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges) {
  Graph g(n);
  for (const auto& [i, j] : edges) g.add_edge(i, j);
  return g;
}

Graph permute(const Graph& g, std::span<const NodeIndex> perm) {
  if (perm.size() != g.size()) throw GraphError("permutation size does not match graph");
  Graph out(g.size());
  for (NodeIndex i = 0; i < g.size(); ++i) {
    for (NodeIndex j = i + 1; j < g.size(); ++j) {
      if (g.is_forbidden(i, j)) out.forbid(perm[i], perm[j]);
    }
  }
  for (const auto& e : g.edges()) out.add_edge(perm[e.first], perm[e.second]);
  return out;
}

}  // namespace netcatalyst
