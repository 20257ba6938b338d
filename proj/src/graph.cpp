#include "injnet/graph.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace injnet {

namespace {

inline bool test_bit(std::span<const std::uint64_t> row, NodeId v) {
  return (row[v >> 6] >> (v & 63)) & 1u;
}

std::vector<Edge> canonical_edges(std::span<const Edge> edges) {
  std::vector<Edge> out(edges.begin(), edges.end());
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

}  // namespace

Graph::Graph(std::size_t node_count)
    : node_count_(node_count),
      words_((node_count + 63) / 64),
      bits_(node_count * words_, 0),
      degree_(node_count, 0) {
  if (node_count == 0) {
    throw std::invalid_argument("graph must have at least one node");
  }
}

void Graph::check_node(NodeId v) const {
  if (v >= node_count_) {
    throw std::out_of_range("node " + std::to_string(v) + " out of range (n=" +
                            std::to_string(node_count_) + ")");
  }
}

void Graph::add_edge(NodeId u, NodeId v, EdgeKind kind) {
  check_node(u);
  check_node(v);
  if (u == v) {
    throw std::invalid_argument("self-loop at node " + std::to_string(u));
  }
  if (u > v) std::swap(u, v);
  if (has_edge(u, v)) {
    throw std::invalid_argument("duplicate edge " + std::to_string(u) + "-" +
                                std::to_string(v));
  }
  bits_[u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  bits_[v * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  ++degree_[u];
  ++degree_[v];
  edges_.push_back({u, v, kind});
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  return test_bit(row(u), v);
}

std::size_t Graph::degree(NodeId v) const {
  check_node(v);
  return degree_[v];
}

std::vector<NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  std::vector<NodeId> out;
  out.reserve(degree_[v]);
  auto r = row(v);
  for (std::size_t w = 0; w < words_; ++w) {
    for (std::uint64_t bits = r[w]; bits != 0; bits &= bits - 1) {
      out.push_back(static_cast<NodeId>(w * 64 + std::countr_zero(bits)));
    }
  }
  return out;
}

bool Graph::operator==(const Graph& other) const {
  return node_count_ == other.node_count_ &&
         canonical_edges(edges_) == canonical_edges(other.edges_);
}

std::vector<Component> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<bool> seen(n, false);
  std::vector<Component> out;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    Component comp;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

double local_clustering(const Graph& g, NodeId v) {
  const std::size_t deg = g.degree(v);
  if (deg < 2) return 0.0;
  // Each edge among the neighbours is seen from both of its endpoints.
  auto rv = g.row(v);
  std::size_t twice_links = 0;
  for (NodeId u : g.neighbors(v)) {
    auto ru = g.row(u);
    for (std::size_t w = 0; w < g.words_per_row(); ++w) {
      twice_links += std::popcount(ru[w] & rv[w]);
    }
  }
  const double pairs = 0.5 * static_cast<double>(deg) * static_cast<double>(deg - 1);
  return 0.5 * static_cast<double>(twice_links) / pairs;
}

double clustering_coefficient(const Graph& g) {
  double sum = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) sum += local_clustering(g, v);
  return sum / static_cast<double>(g.node_count());
}

DistanceMatrix all_pairs_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::size_t words = g.words_per_row();
  DistanceMatrix d(n);
  std::vector<std::uint64_t> visited(words), frontier(words), next(words);
  for (NodeId src = 0; src < n; ++src) {
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    visited[src >> 6] |= std::uint64_t{1} << (src & 63);
    frontier[src >> 6] |= std::uint64_t{1} << (src & 63);
    d.set(src, src, 0);
    for (std::uint32_t depth = 1;; ++depth) {
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t w = 0; w < words; ++w) {
        for (std::uint64_t bits = frontier[w]; bits != 0; bits &= bits - 1) {
          auto r = g.row(static_cast<NodeId>(w * 64 + std::countr_zero(bits)));
          for (std::size_t k = 0; k < words; ++k) next[k] |= r[k];
        }
      }
      bool any = false;
      for (std::size_t w = 0; w < words; ++w) {
        next[w] &= ~visited[w];
        visited[w] |= next[w];
        any = any || next[w] != 0;
        for (std::uint64_t bits = next[w]; bits != 0; bits &= bits - 1) {
          d.set(src, static_cast<NodeId>(w * 64 + std::countr_zero(bits)), depth);
        }
      }
      if (!any) break;
      frontier.swap(next);
    }
  }
  return d;
}

double characteristic_path_length(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) {
    throw std::invalid_argument("characteristic path length needs at least 2 nodes");
  }
  // Integer accumulation keeps the mean exact up to the final division.
  std::uint64_t total = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      total += d.reachable(u, v) ? d.at(u, v) : n;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(total) / pairs;
}

double characteristic_path_length(const Graph& g) {
  if (g.node_count() < 2) {
    throw std::invalid_argument("characteristic path length needs at least 2 nodes");
  }
  return characteristic_path_length(all_pairs_distances(g));
}

MetricsReport metrics(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw std::invalid_argument("metrics need at least 2 nodes");
  const DistanceMatrix d = all_pairs_distances(g);
  std::size_t reachable = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) reachable += d.reachable(u, v);
  }
  MetricsReport r;
  r.gamma = clustering_coefficient(g);
  r.L = characteristic_path_length(d);
  r.component_count = connected_components(g).size();
  r.connected_pair_ratio =
      static_cast<double>(reachable) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
  r.node_count = n;
  r.edge_count = g.edge_count();
  return r;
}

}  // namespace injnet
