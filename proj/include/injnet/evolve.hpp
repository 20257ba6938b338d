#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "injnet/graph.hpp"
#include "injnet/scenario.hpp"

namespace injnet {

using Rng = std::mt19937_64;

/// Fixed-length bit vector; bit i selects scenario.candidate_pairs[i].
class Genome {
 public:
  Genome() = default;
  explicit Genome(std::size_t length, bool value = false) : bits_(length, value ? 1 : 0) {}

  // Accepts only '0' and '1'.
  static Genome from_string(std::string_view bits);
  std::string to_string() const;

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }
  std::size_t popcount() const;

  bool operator==(const Genome&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct FitnessWeights {
  double w_gamma = 0.4;
  double w_L = 0.4;
  double w_B = 0.2;

  // Non-negative and summing to 1 within 1e-9.
  void validate() const;
  bool operator==(const FitnessWeights&) const = default;
};

struct FitnessValue {
  double scalar = 0.0;
  double gamma = 0.0;
  double L = 0.0;
  double L_norm = 0.0;
  std::size_t bypass_count = 0;
  bool operator==(const FitnessValue&) const = default;
};

// Throws std::invalid_argument on a length mismatch.
Graph decode(const Genome& g, const Scenario& s);

/// Weighted sum w_gamma*gamma + w_L*(1 - L_norm) + w_B*(1 - B/len), where
/// L_norm = (L - 1)/(n - 1) clamped to [0, 1] and the bypass term is 1 for
/// an empty genome. Higher is better.
FitnessValue evaluate(const Genome& g, const Scenario& s, const FitnessWeights& w);
// Same aggregation from precomputed metrics of the decoded graph.
FitnessValue fitness_from_metrics(const MetricsReport& m, std::size_t bypass_count,
                                  std::size_t genome_length, const FitnessWeights& w);

std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              std::size_t cut1, std::size_t cut2);
std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2, Rng& rng);
std::pair<Genome, Genome> uniform_crossover(const Genome& p1, const Genome& p2,
                                            const Genome& mask);
std::pair<Genome, Genome> uniform_crossover(const Genome& p1, const Genome& p2, Rng& rng);

Genome bit_flip_mutation(const Genome& g, double rate, Rng& rng);

// k draws with replacement; best scalar wins, lowest index on ties.
std::size_t tournament_select(std::span<const double> scalars, std::size_t k, Rng& rng);

enum class Variant { kGenerational, kSteadyState };
enum class Crossover { kTwoPoint, kUniform };

std::string_view to_string(Variant v);    // GENERATIONAL | STEADY_STATE
std::string_view to_string(Crossover c);  // TWO_POINT | UNIFORM
Variant parse_variant(std::string_view s);      // also gen | ss
Crossover parse_crossover(std::string_view s);  // also 2point | uniform

struct GaConfig {
  Variant variant = Variant::kSteadyState;
  Crossover crossover = Crossover::kTwoPoint;
  std::size_t population_size = 100;
  double crossover_probability = 0.9;
  std::optional<double> mutation_rate;  // unset: 1 / genome length
  std::size_t tournament_size = 2;
  std::size_t max_evaluations = 10000;
  std::size_t elitism_count = 1;  // generational only
  FitnessWeights weights;
  std::uint64_t seed = 1;

  void validate() const;
  double resolved_mutation_rate(std::size_t genome_length) const;
};

struct Individual {
  Genome genome;
  FitnessValue fitness;
};

using Population = std::vector<Individual>;

struct TracePoint {
  std::size_t evaluations;
  double best_scalar;
  bool operator==(const TracePoint&) const = default;
};

/// Scores genomes against one scenario and keeps the run's books: the
/// evaluation count, the best individual seen, and a best-so-far trace
/// sampled every `checkpoint_interval` evaluations.
class Evaluator {
 public:
  Evaluator(const Scenario& s, FitnessWeights w, std::size_t checkpoint_interval);

  FitnessValue operator()(const Genome& g);

  std::size_t evaluations() const noexcept { return evaluations_; }
  const std::optional<Individual>& best() const noexcept { return best_; }
  // Checkpoints so far, plus a final point if the count is off-checkpoint.
  std::vector<TracePoint> trace() const;
  const Scenario& scenario() const noexcept { return scenario_; }

 private:
  const Scenario& scenario_;
  FitnessWeights weights_;
  Graph base_;
  std::size_t interval_;
  std::size_t evaluations_ = 0;
  std::optional<Individual> best_;
  std::vector<TracePoint> trace_;
};

Population random_population(std::size_t size, std::size_t genome_length, Evaluator& eval,
                             Rng& rng);

// Evaluations spent: population_size - elitism_count.
Population generational_step(const Population& pop, const GaConfig& cfg, Evaluator& eval,
                             Rng& rng);
// Evaluations spent: 2.
void steady_state_step(Population& pop, const GaConfig& cfg, Evaluator& eval, Rng& rng);

struct RunResult {
  Genome best_genome;
  FitnessValue best_fitness;
  std::vector<TracePoint> trace;
  std::size_t evaluations_used = 0;
};

/// One GA run. Steps are taken while the next one fits in the evaluation
/// budget, so evaluations_used never exceeds max_evaluations.
/// Throws DegenerateScenario when the scenario has no candidate pairs.
RunResult run(const GaConfig& cfg, const Scenario& s);

}  // namespace injnet
