#ifndef NETCATALYST_GRAPH_HPP_
#define NETCATALYST_GRAPH_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netcatalyst {

using NodeIndex = std::size_t;

/// Unordered node pair, stored with first < second.
struct Dyad {
  NodeIndex first = 0;
  NodeIndex second = 0;

  friend bool operator==(const Dyad&, const Dyad&) = default;
  friend auto operator<=>(const Dyad&, const Dyad&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SelfLoopError : public GraphError {
 public:
  explicit SelfLoopError(NodeIndex node);
};

class NodeRangeError : public GraphError {
 public:
  NodeRangeError(NodeIndex node, std::size_t size);
};

class ForbiddenPairError : public GraphError {
 public:
  ForbiddenPairError(NodeIndex i, NodeIndex j);
};

/// Undirected, loop-free binary network over a fixed roster of `size()` nodes.
///
/// Adjacency and structural zeros are both stored as one bitset row per node,
/// so edge tests are O(1) and shared-partner counts are a popcount over the
/// intersection of two rows. A pair marked forbidden can never hold an edge.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_; }
  std::size_t pair_count() const noexcept { return n_ < 2 ? 0 : n_ * (n_ - 1) / 2; }

  bool has_edge(NodeIndex i, NodeIndex j) const noexcept {
    return (adjacency_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  bool is_forbidden(NodeIndex i, NodeIndex j) const noexcept {
    return (forbidden_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  std::size_t degree(NodeIndex i) const noexcept { return degree_[i]; }

  /// Number of nodes adjacent to both i and j.
  std::size_t shared_partners(NodeIndex i, NodeIndex j) const noexcept {
    const std::uint64_t* a = &adjacency_[i * words_];
    const std::uint64_t* b = &adjacency_[j * words_];
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
    return count;
  }

  std::span<const std::uint64_t> row(NodeIndex i) const noexcept {
    return {adjacency_.data() + i * words_, words_};
  }

  /// Throws SelfLoopError, NodeRangeError or ForbiddenPairError.
  void check_pair(NodeIndex i, NodeIndex j) const;

  // In-place mutation of a caller-owned value. All of these validate the pair.
  void toggle(NodeIndex i, NodeIndex j);
  void add_edge(NodeIndex i, NodeIndex j);
  void remove_edge(NodeIndex i, NodeIndex j);

  /// Unchecked flip for sampler inner loops; the caller guarantees validity.
  void flip(NodeIndex i, NodeIndex j) noexcept;

  /// Marks (i, j) as a structural zero, dropping any edge it held.
  void forbid(NodeIndex i, NodeIndex j);
  void allow(NodeIndex i, NodeIndex j);
  /// Forbids every pair incident to `i`.
  void forbid_node(NodeIndex i);

  /// Appends one node with no ties and no forbidden pairs; returns its index.
  NodeIndex add_node();

  template <typename F>
  void for_each_neighbor(NodeIndex i, F&& f) const {
    const std::uint64_t* r = &adjacency_[i * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = r[w];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        f(static_cast<NodeIndex>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<NodeIndex> neighbors(NodeIndex i) const;
  /// Edges as sorted dyads.
  std::vector<Dyad> edges() const;
  /// All pairs that are not structural zeros, sorted.
  std::vector<Dyad> free_pairs() const;
  std::size_t forbidden_count() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adjacency_ == b.adjacency_ && a.forbidden_ == b.forbidden_;
  }

 private:
  void set_bit(std::vector<std::uint64_t>& bits, NodeIndex i, NodeIndex j, bool value) noexcept;
  void resize_words(std::size_t n);

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::size_t edges_ = 0;
  std::vector<std::uint64_t> adjacency_;
  std::vector<std::uint64_t> forbidden_;
  std::vector<std::size_t> degree_;
};

/// Pure toggle: returns a copy of `g` with (i, j) flipped.
Graph toggle_edge(const Graph& g, NodeIndex i, NodeIndex j);

/// Number of free pairs whose tie status differs between `a` and `b`.
std::size_t hamming_distance(const Graph& a, const Graph& b);

/// Complete graph on n nodes.
Graph complete_graph(std::size_t n);

/// Builds a graph from an edge list; throws on invalid pairs.
Graph graph_from_edges(std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges);

/// Relabels nodes so that node i of `g` becomes node perm[i].
Graph permute(const Graph& g, std::span<const NodeIndex> perm);

}  // namespace netcatalyst

#endif  // NETCATALYST_GRAPH_HPP_
