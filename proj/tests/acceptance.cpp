// Acceptance suite: one PASS/FAIL line per criterion.
//
//   injnet_acceptance            run everything
//   injnet_acceptance 1 2 5      run selected criteria
//   INJNET_ACCEPTANCE_OUT=dir    where criterion 8 writes its report

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "injnet/evolve.hpp"
#include "injnet/graph.hpp"
#include "injnet/harness.hpp"
#include "injnet/scenario.hpp"
#include "oracles.hpp"

using namespace injnet;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Graph complete(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

std::string trace_bytes(const std::vector<TracePoint>& t) {
  std::ostringstream out;
  for (const auto& p : t) out << p.evaluations << ':' << fmt("%.17g", p.best_scalar) << ';';
  return out.str();
}

// 1. Metric oracle equivalence on 200 random graphs, n <= 12, under 10 s.
Outcome metric_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  int gamma_bad = 0, L_bad = 0;
  double worst_L = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Graph g = oracle::random_graph(size(rng), density(rng), rng);
    const auto a = oracle::adjacency(g);
    if (clustering_coefficient(g) != oracle::clustering(a)) ++gamma_bad;
    const double dL = std::abs(characteristic_path_length(g) - oracle::path_length(a));
    worst_L = std::max(worst_L, dL);
    if (dL > 1e-12) ++L_bad;
  }
  const double secs = seconds_since(t0);
  return {gamma_bad == 0 && L_bad == 0 && secs < 10.0,
          "gamma mismatches " + std::to_string(gamma_bad) + ", max |dL| " + fmt("%.3g", worst_L) +
              ", " + fmt("%.2f", secs) + " s"};
}

// 2. Hand-checkable metric values.
Outcome hand_metrics() {
  constexpr double kTol = 1e-15;
  Graph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  Graph kite(4);
  kite.add_edge(0, 1);
  kite.add_edge(0, 2);
  kite.add_edge(1, 2);
  kite.add_edge(2, 3);
  Graph split(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  const MetricsReport k4 = metrics(complete(4));
  const MetricsReport mp3 = metrics(p3);
  const double gk = clustering_coefficient(kite);
  const double Ls = characteristic_path_length(split);
  const bool ok = std::abs(k4.gamma - 1.0) <= kTol && std::abs(k4.L - 1.0) <= kTol &&
                  std::abs(mp3.gamma) <= kTol && std::abs(mp3.L - 4.0 / 3.0) <= kTol &&
                  std::abs(gk - 7.0 / 12.0) <= kTol && std::abs(Ls - 3.0) <= kTol;
  return {ok, "K4 (" + fmt("%.17g", k4.gamma) + ", " + fmt("%.17g", k4.L) + "), P3 (" +
                  fmt("%.17g", mp3.gamma) + ", " + fmt("%.17g", mp3.L) + "), kite gamma " +
                  fmt("%.17g", gk) + ", split L " + fmt("%.17g", Ls)};
}

// 3. Component counts and the unit-disk law over 100 seeds per setting, under 30 s.
Outcome scenario_guarantees() {
  const auto t0 = Clock::now();
  const std::pair<std::size_t, std::size_t> settings[] = {{30, 5}, {42, 3}, {70, 1}};
  int bad = 0, checked = 0;
  for (auto [n, k] : settings) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const Scenario s = generate_scenario({n, k, 0.15, 1.0, 0.05, seed});
      ++checked;
      bool ok = connected_components(s.adhoc_graph()).size() == k && s.node_count() == n;
      const double r = s.params.radio_range;
      std::set<NodePair> edges(s.adhoc_edges.begin(), s.adhoc_edges.end());
      std::size_t expected = 0;
      for (NodeId u = 0; u < n && ok; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
          const double d = std::hypot(s.positions[u].x - s.positions[v].x,
                                      s.positions[u].y - s.positions[v].y);
          const bool close = d <= r;
          expected += close;
          if (close != edges.count({u, v})) ok = false;
        }
      }
      ok = ok && expected == edges.size();
      bad += !ok;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 30.0, std::to_string(checked) + " scenarios, " +
                                       std::to_string(bad) + " violations, " +
                                       fmt("%.2f", secs) + " s"};
}

// 4. Crossover and mutation contracts.
Outcome operator_contracts() {
  Rng rng(4);
  std::uniform_int_distribution<std::size_t> len(1, 200);
  std::bernoulli_distribution bit(0.5);
  auto random_genome = [&](std::size_t n) {
    Genome g(n);
    for (std::size_t i = 0; i < n; ++i) g.set(i, bit(rng));
    return g;
  };
  int closure_bad = 0;
  for (int op = 0; op < 2; ++op) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = len(rng);
      const Genome a = random_genome(n), b = random_genome(n);
      auto [x, y] = op == 0 ? two_point_crossover(a, b, rng) : uniform_crossover(a, b, rng);
      for (std::size_t i = 0; i < n; ++i) {
        if ((x[i] != a[i] && x[i] != b[i]) || (y[i] != a[i] && y[i] != b[i])) {
          ++closure_bad;
          break;
        }
      }
    }
  }

  auto [c1, c2] = two_point_crossover(Genome::from_string("000000"), Genome::from_string("111111"), 2, 4);
  const bool worked = c1.to_string() == "001100" && c2.to_string() == "110011";

  const Genome p1 = Genome::from_string("0101"), p2 = Genome::from_string("1010");
  auto [z1, z2] = uniform_crossover(p1, p2, Genome(4));
  auto [o1, o2] = uniform_crossover(p1, p2, Genome(4, true));
  const bool masks = z1 == p1 && z2 == p2 && o1 == p2 && o2 == p1;

  bool rate_ids = true;
  for (int t = 0; t < 100; ++t) {
    const Genome g = random_genome(len(rng));
    const Genome keep = bit_flip_mutation(g, 0.0, rng);
    const Genome flip = bit_flip_mutation(g, 1.0, rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (keep[i] != g[i] || flip[i] == g[i]) rate_ids = false;
    }
  }

  constexpr int kTrials = 10000;
  const Genome zero(1000);
  double total = 0;
  for (int t = 0; t < kTrials; ++t) total += static_cast<double>(bit_flip_mutation(zero, 0.05, rng).popcount());
  const double mean = total / kTrials;
  const double sigma = std::sqrt(1000 * 0.05 * 0.95) / std::sqrt(double(kTrials));
  const bool binomial = std::abs(mean - 50.0) <= 3 * sigma;

  return {closure_bad == 0 && worked && masks && rate_ids && binomial,
          "closure violations " + std::to_string(closure_bad) + ", worked example " +
              (worked ? "ok" : "BAD") + ", masks " + (masks ? "ok" : "BAD") + ", rate 0/1 " +
              (rate_ids ? "ok" : "BAD") + ", mean flips " + fmt("%.4f", mean) + " (3 sigma " +
              fmt("%.4f", 3 * sigma) + ")"};
}

struct FivePartitionRuns {
  std::vector<RunResult> gen, ss;
};

const Scenario& five_partition_scenario() {
  static const Scenario s = generate_scenario({30, 5, 0.15, 1.0, 0.05, 1});
  return s;
}

const FivePartitionRuns& five_partition_runs() {
  static const FivePartitionRuns runs = [] {
    FivePartitionRuns r;
    for (auto variant : {Variant::kGenerational, Variant::kSteadyState}) {
      for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GaConfig cfg;
        cfg.variant = variant;
        cfg.seed = seed;
        (variant == Variant::kGenerational ? r.gen : r.ss).push_back(run(cfg, five_partition_scenario()));
      }
    }
    return r;
  }();
  return runs;
}

// 5. Monotone traces and bitwise reproducibility, both variants, 30 runs, under 2 min.
Outcome monotone_and_deterministic() {
  const auto t0 = Clock::now();
  const auto& runs = five_partition_runs();
  int non_monotone = 0, irreproducible = 0;
  for (auto variant : {Variant::kGenerational, Variant::kSteadyState}) {
    const auto& set = variant == Variant::kGenerational ? runs.gen : runs.ss;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& t = set[i].trace;
      for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k].best_scalar < t[k - 1].best_scalar) {
          ++non_monotone;
          break;
        }
      }
      GaConfig cfg;
      cfg.variant = variant;
      cfg.seed = i + 1;
      const RunResult again = run(cfg, five_partition_scenario());
      if (trace_bytes(again.trace) != trace_bytes(t) || !(again.best_genome == set[i].best_genome)) {
        ++irreproducible;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {non_monotone == 0 && irreproducible == 0 && secs < 120.0,
          "60 runs: non-monotone " + std::to_string(non_monotone) + ", irreproducible " +
              std::to_string(irreproducible) + ", " + fmt("%.1f", secs) + " s"};
}

// 6. Both variants reach the exhaustive optimum in >= 29/30 seeds, under 1 min.
Outcome small_instance_optimality() {
  const auto t0 = Clock::now();
  const Scenario s = generate_scenario({6, 3, 0.15, 1.0, 0.05, 1});
  const std::size_t len = s.candidate_pairs.size();
  if (len == 0 || len > 12) return {false, "instance has " + std::to_string(len) + " candidates"};
  const FitnessWeights w;
  double optimum = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
    Genome g(len);
    for (std::size_t i = 0; i < len; ++i) g.set(i, (mask >> i) & 1u);
    optimum = std::max(optimum, evaluate(g, s, w).scalar);
  }
  int hits_gen = 0, hits_ss = 0;
  for (auto variant : {Variant::kGenerational, Variant::kSteadyState}) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      GaConfig cfg;
      cfg.variant = variant;
      cfg.max_evaluations = 4096;
      cfg.seed = seed;
      const bool hit = std::abs(run(cfg, s).best_fitness.scalar - optimum) <= 1e-9;
      (variant == Variant::kGenerational ? hits_gen : hits_ss) += hit;
    }
  }
  const double secs = seconds_since(t0);
  return {hits_gen >= 29 && hits_ss >= 29 && secs < 60.0,
          std::to_string(len) + " candidates, optimum " + fmt("%.12f", optimum) + "; genGA " +
              std::to_string(hits_gen) + "/30, ssGA " + std::to_string(hits_ss) + "/30, " +
              fmt("%.1f", secs) + " s"};
}

// 7. ssGA + 2-point leaves a single component in >= 29/30 runs.
Outcome partition_healing() {
  int connected = 0;
  for (const auto& r : five_partition_runs().ss) {
    connected += metrics(decode(r.best_genome, five_partition_scenario())).component_count == 1;
  }
  return {connected >= 29, std::to_string(connected) + "/30 runs connected"};
}

// 8. STEADY_STATE/TWO_POINT first on >= 2 of 3 scenarios and never below second.
Outcome qualitative_replication() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  const char* out = std::getenv("INJNET_ACCEPTANCE_OUT");
  cfg.output_dir = out ? std::filesystem::path(out) : std::filesystem::path("acceptance_experiment");
  const ExperimentReport report = run_experiment(cfg);
  const Combo target{Variant::kSteadyState, Crossover::kTwoPoint};
  int first = 0, worst_rank = 0;
  std::string detail;
  for (const auto& name : report.scenario_names()) {
    const auto ranked = rank_combos(report, name);
    const int rank = static_cast<int>(std::find(ranked.begin(), ranked.end(), target) - ranked.begin()) + 1;
    first += rank == 1;
    worst_rank = std::max(worst_rank, rank);
    detail += "\n      " + name + ":";
    for (const auto& c : ranked) detail += " " + label(c) + "=" + fmt("%.6f", report.find(name, c)->mean);
  }
  const double secs = seconds_since(t0);
  return {first >= 2 && worst_rank <= 2 && secs < 600.0,
          "target first on " + std::to_string(first) + "/3, worst rank " +
              std::to_string(worst_rank) + ", " + fmt("%.0f", secs) + " s, report in " +
              cfg.output_dir.string() + detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric oracle equivalence", metric_oracles},
      {"hand-checkable metrics", hand_metrics},
      {"scenario guarantees", scenario_guarantees},
      {"operator contracts", operator_contracts},
      {"GA monotonicity + determinism", monotone_and_deterministic},
      {"small-instance optimality", small_instance_optimality},
      {"partition healing", partition_healing},
      {"qualitative replication (ssGA + 2-point ranks first)", qualitative_replication},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << criteria[i].first << " -- "
              << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
