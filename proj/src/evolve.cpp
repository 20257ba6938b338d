#include "injnet/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "injnet/error.hpp"

namespace injnet {

namespace {

// Uniform on [0, 1) from the top 53 bits.
double unit01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_same_length(const Genome& a, const Genome& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("genome length mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
}

std::pair<Genome, Genome> vary(const Individual& a, const Individual& b, const GaConfig& cfg,
                               double mutation_rate, Rng& rng) {
  std::pair<Genome, Genome> kids;
  if (unit01(rng) < cfg.crossover_probability) {
    kids = cfg.crossover == Crossover::kTwoPoint ? two_point_crossover(a.genome, b.genome, rng)
                                                 : uniform_crossover(a.genome, b.genome, rng);
  } else {
    kids = {a.genome, b.genome};
  }
  kids.first = bit_flip_mutation(kids.first, mutation_rate, rng);
  kids.second = bit_flip_mutation(kids.second, mutation_rate, rng);
  return kids;
}

std::vector<double> scalars_of(const Population& pop) {
  std::vector<double> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.fitness.scalar);
  return out;
}

}  // namespace

Genome Genome::from_string(std::string_view bits) {
  Genome g(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw std::invalid_argument("genome string may contain only '0' and '1'");
    }
    g.bits_[i] = bits[i] == '1';
  }
  return g;
}

std::string Genome::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::size_t Genome::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void FitnessWeights::validate() const {
  if (w_gamma < 0 || w_L < 0 || w_B < 0) throw std::invalid_argument("weights must be >= 0");
  if (std::abs(w_gamma + w_L + w_B - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1");
  }
}

Graph decode(const Genome& g, const Scenario& s) {
  if (g.size() != s.candidate_pairs.size()) {
    throw std::invalid_argument("genome length " + std::to_string(g.size()) +
                                " does not match " + std::to_string(s.candidate_pairs.size()) +
                                " candidate pairs");
  }
  Graph graph = s.adhoc_graph();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]) graph.add_edge(s.candidate_pairs[i].first, s.candidate_pairs[i].second,
                             EdgeKind::kBypass);
  }
  return graph;
}

FitnessValue fitness_from_metrics(const MetricsReport& m, std::size_t bypass_count,
                                  std::size_t genome_length, const FitnessWeights& w) {
  FitnessValue f;
  f.gamma = m.gamma;
  f.L = m.L;
  f.L_norm = std::clamp((m.L - 1.0) / static_cast<double>(m.node_count - 1), 0.0, 1.0);
  f.bypass_count = bypass_count;
  const double bypass_term =
      genome_length == 0
          ? 1.0
          : 1.0 - static_cast<double>(bypass_count) / static_cast<double>(genome_length);
  f.scalar = w.w_gamma * f.gamma + w.w_L * (1.0 - f.L_norm) + w.w_B * bypass_term;
  return f;
}

FitnessValue evaluate(const Genome& g, const Scenario& s, const FitnessWeights& w) {
  const Graph graph = decode(g, s);
  return fitness_from_metrics(metrics(graph), g.popcount(), g.size(), w);
}

std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2,
                                              std::size_t cut1, std::size_t cut2) {
  require_same_length(p1, p2);
  if (cut1 > cut2 || cut2 > p1.size()) throw std::invalid_argument("invalid crossover cuts");
  Genome c1 = p1, c2 = p2;
  for (std::size_t i = cut1; i < cut2; ++i) {
    c1.set(i, p2[i]);
    c2.set(i, p1[i]);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> two_point_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
  require_same_length(p1, p2);
  std::uniform_int_distribution<std::size_t> cut(0, p1.size());
  std::size_t a = cut(rng), b = cut(rng);
  if (a > b) std::swap(a, b);
  return two_point_crossover(p1, p2, a, b);
}

std::pair<Genome, Genome> uniform_crossover(const Genome& p1, const Genome& p2,
                                            const Genome& mask) {
  require_same_length(p1, p2);
  require_same_length(p1, mask);
  Genome c1 = p1, c2 = p2;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      c1.set(i, p2[i]);
      c2.set(i, p1[i]);
    }
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> uniform_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
  require_same_length(p1, p2);
  Genome mask(p1.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask.set(i, unit01(rng) < 0.5);
  return uniform_crossover(p1, p2, mask);
}

Genome bit_flip_mutation(const Genome& g, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("mutation rate outside [0,1]");
  Genome out = g;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (unit01(rng) < rate) out.flip(i);
  }
  return out;
}

std::size_t tournament_select(std::span<const double> scalars, std::size_t k, Rng& rng) {
  if (scalars.empty()) throw std::invalid_argument("tournament over an empty population");
  if (k < 1 || k > scalars.size()) throw std::invalid_argument("tournament size out of range");
  std::uniform_int_distribution<std::size_t> pick(0, scalars.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t c = pick(rng);
    if (scalars[c] > scalars[best] || (scalars[c] == scalars[best] && c < best)) best = c;
  }
  return best;
}

std::string_view to_string(Variant v) {
  return v == Variant::kGenerational ? "GENERATIONAL" : "STEADY_STATE";
}

std::string_view to_string(Crossover c) {
  return c == Crossover::kTwoPoint ? "TWO_POINT" : "UNIFORM";
}

Variant parse_variant(std::string_view s) {
  if (s == "gen" || s == "GENERATIONAL") return Variant::kGenerational;
  if (s == "ss" || s == "STEADY_STATE") return Variant::kSteadyState;
  throw std::invalid_argument("unknown GA variant '" + std::string(s) + "'");
}

Crossover parse_crossover(std::string_view s) {
  if (s == "2point" || s == "TWO_POINT") return Crossover::kTwoPoint;
  if (s == "uniform" || s == "UNIFORM") return Crossover::kUniform;
  throw std::invalid_argument("unknown crossover '" + std::string(s) + "'");
}

void GaConfig::validate() const {
  if (population_size == 0 || population_size % 2 != 0) {
    throw std::invalid_argument("population_size must be a positive even integer");
  }
  if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0)) {
    throw std::invalid_argument("crossover_probability outside [0,1]");
  }
  if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation_rate outside [0,1]");
  }
  if (tournament_size < 1 || tournament_size > population_size) {
    throw std::invalid_argument("tournament_size must be in [1, population_size]");
  }
  if (elitism_count >= population_size) {
    throw std::invalid_argument("elitism_count must be < population_size");
  }
  if (max_evaluations < population_size) {
    throw std::invalid_argument("max_evaluations must cover the initial population");
  }
  weights.validate();
}

double GaConfig::resolved_mutation_rate(std::size_t genome_length) const {
  if (mutation_rate) return *mutation_rate;
  return genome_length == 0 ? 0.0 : 1.0 / static_cast<double>(genome_length);
}

Evaluator::Evaluator(const Scenario& s, FitnessWeights w, std::size_t checkpoint_interval)
    : scenario_(s), weights_(w), base_(s.adhoc_graph()), interval_(checkpoint_interval) {
  if (interval_ == 0) throw std::invalid_argument("checkpoint interval must be positive");
  if (s.node_count() < 2) throw DegenerateScenario("scenario needs at least 2 nodes");
}

FitnessValue Evaluator::operator()(const Genome& g) {
  const auto& pairs = scenario_.candidate_pairs;
  if (g.size() != pairs.size()) {
    throw std::invalid_argument("genome length does not match candidate pairs");
  }
  Graph graph = base_;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]) graph.add_edge(pairs[i].first, pairs[i].second, EdgeKind::kBypass);
  }
  const FitnessValue f = fitness_from_metrics(metrics(graph), g.popcount(), g.size(), weights_);
  ++evaluations_;
  if (!best_ || f.scalar > best_->fitness.scalar) best_ = Individual{g, f};
  if (evaluations_ % interval_ == 0) trace_.push_back({evaluations_, best_->fitness.scalar});
  return f;
}

std::vector<TracePoint> Evaluator::trace() const {
  std::vector<TracePoint> out = trace_;
  if (best_ && (out.empty() || out.back().evaluations != evaluations_)) {
    out.push_back({evaluations_, best_->fitness.scalar});
  }
  return out;
}

Population random_population(std::size_t size, std::size_t genome_length, Evaluator& eval,
                             Rng& rng) {
  Population pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    Genome g(genome_length);
    for (std::size_t b = 0; b < genome_length; ++b) g.set(b, unit01(rng) < 0.5);
    FitnessValue f = eval(g);
    pop.push_back({std::move(g), f});
  }
  return pop;
}

Population generational_step(const Population& pop, const GaConfig& cfg, Evaluator& eval,
                             Rng& rng) {
  if (pop.size() != cfg.population_size) {
    throw std::invalid_argument("population size does not match config");
  }
  const double rate = cfg.resolved_mutation_rate(eval.scenario().candidate_pairs.size());
  const auto scalars = scalars_of(pop);

  Population next;
  next.reserve(pop.size());
  std::vector<std::size_t> order(pop.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scalars[a] > scalars[b]; });
  for (std::size_t e = 0; e < cfg.elitism_count; ++e) next.push_back(pop[order[e]]);

  while (next.size() < pop.size()) {
    const auto& a = pop[tournament_select(scalars, cfg.tournament_size, rng)];
    const auto& b = pop[tournament_select(scalars, cfg.tournament_size, rng)];
    auto [k1, k2] = vary(a, b, cfg, rate, rng);
    FitnessValue f1 = eval(k1);
    next.push_back({std::move(k1), f1});
    if (next.size() < pop.size()) {
      FitnessValue f2 = eval(k2);
      next.push_back({std::move(k2), f2});
    }
  }
  return next;
}

void steady_state_step(Population& pop, const GaConfig& cfg, Evaluator& eval, Rng& rng) {
  if (pop.size() < 2) throw std::invalid_argument("steady-state step needs population >= 2");
  const double rate = cfg.resolved_mutation_rate(eval.scenario().candidate_pairs.size());
  const auto scalars = scalars_of(pop);
  const auto& a = pop[tournament_select(scalars, cfg.tournament_size, rng)];
  const auto& b = pop[tournament_select(scalars, cfg.tournament_size, rng)];
  auto [k1, k2] = vary(a, b, cfg, rate, rng);
  const FitnessValue f1 = eval(k1);
  const FitnessValue f2 = eval(k2);

  std::size_t worst = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (scalars[i] < scalars[worst]) worst = i;
  }
  const bool first = f1.scalar >= f2.scalar;
  const FitnessValue& fb = first ? f1 : f2;
  if (fb.scalar > scalars[worst]) pop[worst] = {first ? std::move(k1) : std::move(k2), fb};
}

RunResult run(const GaConfig& cfg, const Scenario& s) {
  cfg.validate();
  const std::size_t len = s.candidate_pairs.size();
  if (len == 0) throw DegenerateScenario("scenario has no candidate bypass pairs");

  Rng rng(cfg.seed);
  Evaluator eval(s, cfg.weights, cfg.population_size);
  Population pop = random_population(cfg.population_size, len, eval, rng);

  const std::size_t step_cost = cfg.variant == Variant::kGenerational
                                    ? cfg.population_size - cfg.elitism_count
                                    : 2;
  while (eval.evaluations() + step_cost <= cfg.max_evaluations) {
    if (cfg.variant == Variant::kGenerational) {
      pop = generational_step(pop, cfg, eval, rng);
    } else {
      steady_state_step(pop, cfg, eval, rng);
    }
  }

  RunResult r;
  r.best_genome = eval.best()->genome;
  r.best_fitness = eval.best()->fitness;
  r.trace = eval.trace();
  r.evaluations_used = eval.evaluations();
  return r;
}

}  // namespace injnet
