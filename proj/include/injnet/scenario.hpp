#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "injnet/graph.hpp"

namespace injnet {

using NodePair = std::pair<NodeId, NodeId>;  // first < second

struct ScenarioParams {
  std::size_t node_count = 30;
  std::size_t partition_count = 5;
  double radio_range = 0.15;
  double area_side = 1.0;
  double cluster_radius = 0.05;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument for non-positive sizes or lengths,
  // partition_count > node_count, or a cluster disk wider than the area.
  void validate() const;
  bool operator==(const ScenarioParams&) const = default;
};

enum class CandidatePolicy { kAllNonAdjacent, kInterPartitionOnly };

std::string_view to_string(CandidatePolicy p);
CandidatePolicy parse_candidate_policy(std::string_view s);  // "ALL" | "INTER"

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Scenario {
  ScenarioParams params;
  std::vector<Point> positions;
  std::vector<NodePair> adhoc_edges;      // lexicographic
  std::vector<NodePair> candidate_pairs;  // lexicographic, disjoint from adhoc_edges
  CandidatePolicy policy = CandidatePolicy::kAllNonAdjacent;

  std::size_t node_count() const noexcept { return positions.size(); }
  Graph adhoc_graph() const;
  bool operator==(const Scenario&) const = default;
};

// Attempts at placing separated cluster centres before giving up.
inline constexpr int kCenterPlacementBudget = 10000;
// Node placements tried (each from a derived sub-seed) until the ad-hoc
// graph has exactly partition_count components.
inline constexpr int kComponentResampleBudget = 1000;

/// Clustered unit-disk snapshot. Node i belongs to cluster i mod k and is
/// uniform in that cluster's disk; cluster centres are pairwise more than
/// radio_range + 2 * cluster_radius apart, so clusters never touch. When
/// cluster_radius < radio_range / 2 every cluster is a clique; otherwise
/// placements are resampled until each cluster is connected.
///
/// Throws InfeasibleGeometry when either retry budget runs out.
Scenario generate_scenario(const ScenarioParams& p,
                           CandidatePolicy policy = CandidatePolicy::kAllNonAdjacent);

std::vector<NodePair> candidate_pairs(const Graph& adhoc, CandidatePolicy policy);

void save_scenario(const Scenario& s, std::ostream& out);
void save_scenario(const Scenario& s, const std::filesystem::path& path);
// Throws MalformedFile (with line number) or VersionMismatch.
Scenario load_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace injnet
