#include "injnet/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "injnet/error.hpp"

namespace injnet {

namespace {

constexpr std::string_view kHeader = "injection-scenario v1";

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::mt19937_64 derived_engine(std::uint64_t seed, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(attempt), static_cast<std::uint32_t>(attempt >> 32)};
  return std::mt19937_64(seq);
}

bool within(const Point& a, const Point& b, double range) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= range * range;
}

// Dart throwing with full restarts; every sampled centre counts against the budget.
bool place_centers(const ScenarioParams& p, std::mt19937_64& rng, std::vector<Point>& centers) {
  const double lo = p.cluster_radius;
  const double hi = p.area_side - p.cluster_radius;
  const double sep = p.radio_range + 2.0 * p.cluster_radius;
  std::uniform_real_distribution<double> coord(lo, hi);
  int draws = 0;
  while (draws < kCenterPlacementBudget) {
    centers.clear();
    int stuck = 0;
    while (centers.size() < p.partition_count && stuck < 200 && draws < kCenterPlacementBudget) {
      Point c{coord(rng), coord(rng)};
      ++draws;
      const bool ok = std::all_of(centers.begin(), centers.end(), [&](const Point& o) {
        return std::hypot(c.x - o.x, c.y - o.y) > sep;
      });
      if (ok) {
        centers.push_back(c);
        stuck = 0;
      } else {
        ++stuck;
      }
    }
    if (centers.size() == p.partition_count) return true;
  }
  return false;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw MalformedFile(line, "bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line split on whitespace; throws at end of input.
  std::vector<std::string> next(std::string_view expecting) {
    std::string text;
    if (!std::getline(in_, text)) {
      throw MalformedFile(line_ + 1, "unexpected end of file, expected " + std::string(expecting));
    }
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    last_ = text;
    std::istringstream ss(text);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    return toks;
  }
  std::size_t line() const { return line_; }
  const std::string& last() const { return last_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::string last_;
};

}  // namespace

void ScenarioParams::validate() const {
  if (node_count == 0) throw std::invalid_argument("node_count must be positive");
  if (partition_count == 0 || partition_count > node_count) {
    throw std::invalid_argument("partition_count must be in [1, node_count]");
  }
  if (!(radio_range > 0) || !(area_side > 0) || !(cluster_radius > 0)) {
    throw std::invalid_argument("radio_range, area_side and cluster_radius must be positive");
  }
  if (!(2.0 * cluster_radius < area_side)) {
    throw std::invalid_argument("cluster disk does not fit inside the area");
  }
}

std::string_view to_string(CandidatePolicy p) {
  return p == CandidatePolicy::kAllNonAdjacent ? "ALL" : "INTER";
}

CandidatePolicy parse_candidate_policy(std::string_view s) {
  if (s == "ALL") return CandidatePolicy::kAllNonAdjacent;
  if (s == "INTER") return CandidatePolicy::kInterPartitionOnly;
  throw std::invalid_argument("unknown candidate policy '" + std::string(s) + "'");
}

Graph Scenario::adhoc_graph() const {
  Graph g(positions.size());
  for (auto [u, v] : adhoc_edges) g.add_edge(u, v, EdgeKind::kAdHoc);
  return g;
}

std::vector<NodePair> candidate_pairs(const Graph& adhoc, CandidatePolicy policy) {
  const std::size_t n = adhoc.node_count();
  std::vector<std::size_t> comp_of(n, 0);
  if (policy == CandidatePolicy::kInterPartitionOnly) {
    const auto comps = connected_components(adhoc);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (NodeId v : comps[c]) comp_of[v] = c;
    }
  }
  std::vector<NodePair> out;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (adhoc.has_edge(u, v)) continue;
      if (policy == CandidatePolicy::kInterPartitionOnly && comp_of[u] == comp_of[v]) continue;
      out.emplace_back(u, v);
    }
  }
  return out;
}

Scenario generate_scenario(const ScenarioParams& p, CandidatePolicy policy) {
  p.validate();
  const std::size_t n = p.node_count;
  const std::size_t k = p.partition_count;
  std::vector<Point> centers;
  for (int attempt = 0; attempt < kComponentResampleBudget; ++attempt) {
    auto rng = derived_engine(p.seed, static_cast<std::uint64_t>(attempt));
    if (!place_centers(p, rng, centers)) {
      throw InfeasibleGeometry("cannot separate " + std::to_string(k) +
                               " cluster centres within " +
                               std::to_string(kCenterPlacementBudget) + " draws");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Scenario s;
    s.params = p;
    s.policy = policy;
    s.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point& c = centers[i % k];
      const double r = p.cluster_radius * std::sqrt(unit(rng));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      s.positions[i] = {c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
    }
    Graph g(n);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (within(s.positions[u], s.positions[v], p.radio_range)) {
          s.adhoc_edges.emplace_back(u, v);
          g.add_edge(u, v);
        }
      }
    }
    if (connected_components(g).size() != k) continue;
    s.candidate_pairs = candidate_pairs(g, policy);
    return s;
  }
  throw InfeasibleGeometry("no placement with " + std::to_string(k) + " components after " +
                           std::to_string(kComponentResampleBudget) + " resamples");
}

void save_scenario(const Scenario& s, std::ostream& out) {
  const auto& p = s.params;
  out << kHeader << '\n';
  out << "nodes " << p.node_count << " partitions " << p.partition_count << " range "
      << fmt_real(p.radio_range) << " side " << fmt_real(p.area_side) << " cluster_radius "
      << fmt_real(p.cluster_radius) << " seed " << p.seed << '\n';
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    out << "node " << i << ' ' << fmt_real(s.positions[i].x) << ' '
        << fmt_real(s.positions[i].y) << '\n';
  }
  out << "edges " << s.adhoc_edges.size() << '\n';
  for (auto [u, v] : s.adhoc_edges) out << "edge " << u << ' ' << v << '\n';
  out << "policy " << to_string(s.policy) << '\n';
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_scenario(s, out);
  if (!out) throw Error("write failed: " + path.string());
}

Scenario load_scenario(std::istream& in) {
  LineReader rd(in);
  {
    rd.next("header");
    if (rd.last() != kHeader) {
      if (rd.last().rfind("injection-scenario", 0) == 0) {
        throw VersionMismatch("unsupported scenario version: '" + rd.last() + "'");
      }
      throw MalformedFile(rd.line(), "missing 'injection-scenario' header");
    }
  }

  Scenario s;
  auto& p = s.params;
  {
    auto t = rd.next("parameter line");
    const std::size_t ln = rd.line();
    if (t.size() != 12 || t[0] != "nodes" || t[2] != "partitions" || t[4] != "range" ||
        t[6] != "side" || t[8] != "cluster_radius" || t[10] != "seed") {
      throw MalformedFile(ln, "expected 'nodes N partitions K range R side S cluster_radius RHO seed Z'");
    }
    p.node_count = parse_number<std::size_t>(t[1], ln, "node count");
    p.partition_count = parse_number<std::size_t>(t[3], ln, "partition count");
    p.radio_range = parse_number<double>(t[5], ln, "range");
    p.area_side = parse_number<double>(t[7], ln, "side");
    p.cluster_radius = parse_number<double>(t[9], ln, "cluster radius");
    p.seed = parse_number<std::uint64_t>(t[11], ln, "seed");
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw MalformedFile(ln, e.what());
    }
  }

  const std::size_t n = p.node_count;
  s.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto t = rd.next("node line");
    const std::size_t ln = rd.line();
    if (t.size() != 4 || t[0] != "node") throw MalformedFile(ln, "expected 'node ID X Y'");
    if (parse_number<std::size_t>(t[1], ln, "node id") != i) {
      throw MalformedFile(ln, "node ids must be 0..n-1 ascending, expected " + std::to_string(i));
    }
    s.positions[i] = {parse_number<double>(t[2], ln, "x"), parse_number<double>(t[3], ln, "y")};
  }

  std::size_t m = 0;
  {
    auto t = rd.next("edge count");
    if (t.size() != 2 || t[0] != "edges") throw MalformedFile(rd.line(), "expected 'edges M'");
    m = parse_number<std::size_t>(t[1], rd.line(), "edge count");
  }
  Graph g(n);
  for (std::size_t i = 0; i < m; ++i) {
    auto t = rd.next("edge line");
    const std::size_t ln = rd.line();
    if (t.size() != 3 || t[0] != "edge") throw MalformedFile(ln, "expected 'edge U V'");
    const auto u = parse_number<NodeId>(t[1], ln, "endpoint");
    const auto v = parse_number<NodeId>(t[2], ln, "endpoint");
    if (u >= v) throw MalformedFile(ln, "edge endpoints must satisfy u < v");
    if (v >= n) throw MalformedFile(ln, "edge endpoint " + std::to_string(v) + " >= node count");
    if (!s.adhoc_edges.empty() && NodePair(u, v) <= s.adhoc_edges.back()) {
      throw MalformedFile(ln, "edges must be unique and in lexicographic order");
    }
    s.adhoc_edges.emplace_back(u, v);
    g.add_edge(u, v);
  }

  {
    auto t = rd.next("policy trailer");
    if (t.size() != 2 || t[0] != "policy") throw MalformedFile(rd.line(), "expected 'policy ALL|INTER'");
    try {
      s.policy = parse_candidate_policy(t[1]);
    } catch (const std::invalid_argument& e) {
      throw MalformedFile(rd.line(), e.what());
    }
  }
  s.candidate_pairs = candidate_pairs(g, s.policy);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_scenario(in);
}

}  // namespace injnet
