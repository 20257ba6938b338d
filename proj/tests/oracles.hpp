#pragma once

// Brute-force references used only by the tests. Nothing here shares code
// with the library's bitset BFS or popcount clustering.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "injnet/graph.hpp"

namespace injnet::oracle {

using AdjacencyMatrix = std::vector<std::vector<bool>>;

inline AdjacencyMatrix adjacency(const Graph& g) {
  AdjacencyMatrix a(g.node_count(), std::vector<bool>(g.node_count(), false));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = true;
  return a;
}

inline constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;

// Cubic relaxation over intermediate nodes.
inline std::vector<std::vector<std::uint64_t>> floyd_warshall(const AdjacencyMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

// Sum of pair distances with unreachable pairs counted as n, over C(n,2).
// Returned as an exact numerator/denominator pair.
inline std::pair<std::uint64_t, std::uint64_t> path_length_fraction(const AdjacencyMatrix& a) {
  const auto d = floyd_warshall(a);
  const std::size_t n = a.size();
  std::uint64_t total = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += d[i][j] >= kInf ? n : d[i][j];
      ++pairs;
    }
  }
  return {total, pairs};
}

inline double path_length(const AdjacencyMatrix& a) {
  auto [num, den] = path_length_fraction(a);
  return static_cast<double>(num) / static_cast<double>(den);
}

// Enumerates every neighbour pair of v and checks adjacency.
inline std::pair<std::size_t, std::size_t> local_clustering_fraction(const AdjacencyMatrix& a,
                                                                     std::size_t v) {
  std::vector<std::size_t> nb;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (a[v][u]) nb.push_back(u);
  }
  std::size_t linked = 0, pairs = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      ++pairs;
      linked += a[nb[i]][nb[j]];
    }
  }
  return {linked, pairs};
}

inline double clustering(const AdjacencyMatrix& a) {
  double sum = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    auto [linked, pairs] = local_clustering_fraction(a, v);
    if (pairs > 0) sum += static_cast<double>(linked) / static_cast<double>(pairs);
  }
  return sum / static_cast<double>(a.size());
}

inline Graph random_graph(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(density);
  Graph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (edge(rng)) g.add_edge(u, v, edge(rng) ? EdgeKind::kAdHoc : EdgeKind::kBypass);
    }
  }
  return g;
}

}  // namespace injnet::oracle
