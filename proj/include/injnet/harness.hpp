#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "injnet/evolve.hpp"
#include "injnet/scenario.hpp"

namespace injnet {

struct Combo {
  Variant variant = Variant::kSteadyState;
  Crossover crossover = Crossover::kTwoPoint;
  bool operator==(const Combo&) const = default;
};

// "<variant>/<crossover>", e.g. STEADY_STATE/TWO_POINT.
std::string label(const Combo& c);

// The three station/partition settings 30/5, 42/3 and 70/1.
std::vector<ScenarioParams> default_experiment_scenarios();
std::vector<Combo> all_combos();

struct ExperimentConfig {
  std::vector<ScenarioParams> scenarios = default_experiment_scenarios();
  std::vector<Combo> combos = all_combos();
  std::size_t runs_per_combo = 30;
  GaConfig base;  // variant, crossover and seed are overridden per run
  std::uint64_t base_seed = 1;
  CandidatePolicy policy = CandidatePolicy::kAllNonAdjacent;
  std::filesystem::path output_dir;  // empty: no artifacts written
  unsigned threads = 0;              // 0: hardware concurrency

  void validate() const;
};

/// Line-oriented key/value config:
///
///   injection-experiment v1
///   scenario nodes 30 partitions 5 [range R] [side S] [cluster_radius RHO] [seed Z]
///   combo ss 2point
///   runs 30
///   base_seed 1
///   ...
///
/// Blank lines and lines starting with '#' are ignored. See README for keys.
ExperimentConfig load_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ComboStats {
  std::string scenario;  // n<nodes>_k<partitions>
  std::size_t nodes = 0;
  std::size_t partitions = 0;
  Combo combo;
  std::size_t runs = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
  double min = 0.0;
  double max = 0.0;
  double mean_gamma = 0.0;
  double mean_L = 0.0;
  double mean_bypass = 0.0;
  std::vector<TracePoint> mean_trace;
  std::vector<double> finals;  // per-run final best scalar, by run index
};

struct ExperimentReport {
  std::vector<ComboStats> rows;  // ordered by (nodes, partitions, variant, crossover)

  const ComboStats* find(const std::string& scenario, const Combo& c) const;
  std::vector<std::string> scenario_names() const;
};

std::string scenario_name(const ScenarioParams& p);

// Statistics of one (scenario, combo) cell from its runs, in run-index order.
ComboStats aggregate(const ScenarioParams& p, const Combo& combo,
                     const std::vector<RunResult>& runs);

/// Runs runs_per_combo GA runs per (scenario, combo). Run r is seeded with
/// base_seed + r; each scenario is generated once and shared by all combos.
/// Writes report.csv, ranking.csv and convergence_<scenario>.svg when
/// output_dir is set. Run failures are rethrown as Error annotated with
/// scenario, combo and run index.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Ordered by mean final best scalar, descending; ties by label.
// Throws std::invalid_argument for an unknown scenario.
std::vector<Combo> rank_combos(const ExperimentReport& report, const std::string& scenario);

inline constexpr const char* kReportCsvHeader =
    "scenario,nodes,partitions,variant,crossover,runs,mean,std,min,max,mean_gamma,mean_L,"
    "mean_bypass";

void emit_csv(const ExperimentReport& report, std::ostream& out);
void emit_csv(const ExperimentReport& report, const std::filesystem::path& path);
// Reads back the scalar columns written by emit_csv (no traces).
ExperimentReport parse_report_csv(std::istream& in);

void emit_convergence_svg(const ExperimentReport& report, const std::string& scenario,
                          std::ostream& out);
void emit_convergence_svg(const ExperimentReport& report, const std::string& scenario,
                          const std::filesystem::path& path);

void emit_ranking_csv(const ExperimentReport& report, std::ostream& out);

void write_trace_csv(const std::vector<TracePoint>& trace, const std::filesystem::path& path);

}  // namespace injnet
