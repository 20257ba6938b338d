#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace injnet {

using NodeId = std::uint32_t;

enum class EdgeKind : std::uint8_t { kAdHoc, kBypass };

struct Edge {
  NodeId u;
  NodeId v;
  EdgeKind kind;
  bool operator==(const Edge&) const = default;
};

/// Undirected simple graph over nodes 0..node_count-1.
///
/// Adjacency is stored as one bit row per node so that neighbourhood
/// intersections and breadth-first frontiers are word-parallel.
class Graph {
 public:
  explicit Graph(std::size_t node_count);

  /// Throws std::out_of_range for bad endpoints and std::invalid_argument
  /// for self-loops or a pair that is already present (of either kind).
  void add_edge(NodeId u, NodeId v, EdgeKind kind = EdgeKind::kAdHoc);

  bool has_edge(NodeId u, NodeId v) const;
  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t degree(NodeId v) const;
  std::vector<NodeId> neighbors(NodeId v) const;

  std::size_t words_per_row() const noexcept { return words_; }
  std::span<const std::uint64_t> row(NodeId v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  bool operator==(const Graph& other) const;

 private:
  void check_node(NodeId v) const;

  std::size_t node_count_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> degree_;
  std::vector<Edge> edges_;
};

using Component = std::vector<NodeId>;

// Components ordered by smallest member; members ascending.
std::vector<Component> connected_components(const Graph& g);

// Fraction of adjacent neighbour pairs; 0 when deg(v) < 2.
double local_clustering(const Graph& g, NodeId v);

// Mean local clustering over all nodes, isolated and leaf nodes included.
double clustering_coefficient(const Graph& g);

class DistanceMatrix {
 public:
  static constexpr std::uint32_t kUnreachable =
      std::numeric_limits<std::uint32_t>::max();

  explicit DistanceMatrix(std::size_t n)
      : n_(n), d_(n * n, kUnreachable) {}

  std::size_t size() const noexcept { return n_; }
  std::uint32_t at(NodeId u, NodeId v) const { return d_[u * n_ + v]; }
  bool reachable(NodeId u, NodeId v) const { return at(u, v) != kUnreachable; }
  void set(NodeId u, NodeId v, std::uint32_t d) { d_[u * n_ + v] = d; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> d_;
};

// Hop counts from a breadth-first search at every node.
DistanceMatrix all_pairs_distances(const Graph& g);

/// Mean hop count over unordered pairs. An unreachable pair counts as
/// node_count hops, so the result lies in [1, node_count].
/// Throws std::invalid_argument when node_count < 2.
double characteristic_path_length(const Graph& g);
double characteristic_path_length(const DistanceMatrix& d);

struct MetricsReport {
  double gamma = 0.0;
  double L = 0.0;
  std::size_t component_count = 0;
  double connected_pair_ratio = 0.0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  bool operator==(const MetricsReport&) const = default;
};

MetricsReport metrics(const Graph& g);

}  // namespace injnet
