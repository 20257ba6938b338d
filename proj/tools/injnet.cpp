// injnet: generate scenarios, score bypass-link genomes, run GAs and the
// full experiment matrix.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "injnet/error.hpp"
#include "injnet/evolve.hpp"
#include "injnet/graph.hpp"
#include "injnet/harness.hpp"
#include "injnet/scenario.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace injnet;

  CLI::App app{"Bypass-link optimization for partitioned ad hoc networks"};
  app.require_subcommand(1);

  ScenarioParams gp;
  std::string policy = "ALL";
  std::filesystem::path gen_out;
  auto* gen = app.add_subcommand("generate", "Generate a partitioned unit-disk scenario");
  gen->add_option("--nodes", gp.node_count, "Station count")->required();
  gen->add_option("--partitions", gp.partition_count, "Partition count")->required();
  gen->add_option("--range", gp.radio_range, "Radio range")->capture_default_str();
  gen->add_option("--side", gp.area_side, "Side of the square area")->capture_default_str();
  gen->add_option("--cluster-radius", gp.cluster_radius, "Cluster disk radius")->capture_default_str();
  gen->add_option("--seed", gp.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output scenario file")->required();
  gen->add_option("--policy", policy, "Candidate pairs: ALL or INTER")
      ->check(CLI::IsMember({"ALL", "INTER"}))
      ->capture_default_str();

  std::filesystem::path met_scenario;
  std::string met_genome;
  auto* met = app.add_subcommand("metrics", "Small-world metrics of a scenario");
  met->add_option("--scenario", met_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  met->add_option("--genome", met_genome, "Bypass bit string over the candidate pairs");

  std::filesystem::path evo_scenario, evo_trace = "trace.csv";
  std::string evo_variant, evo_crossover;
  GaConfig ga;
  auto* evo = app.add_subcommand("evolve", "Run one GA on a scenario");
  evo->add_option("--scenario", evo_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  evo->add_option("--variant", evo_variant, "gen or ss")->required()->check(CLI::IsMember({"gen", "ss"}));
  evo->add_option("--crossover", evo_crossover, "2point or uniform")
      ->required()
      ->check(CLI::IsMember({"2point", "uniform"}));
  evo->add_option("--pop", ga.population_size, "Population size")->capture_default_str();
  evo->add_option("--evals", ga.max_evaluations, "Evaluation budget")->capture_default_str();
  evo->add_option("--seed", ga.seed, "RNG seed")->capture_default_str();
  evo->add_option("--wg", ga.weights.w_gamma, "Clustering weight")->capture_default_str();
  evo->add_option("--wl", ga.weights.w_L, "Path-length weight")->capture_default_str();
  evo->add_option("--wb", ga.weights.w_B, "Bypass-count weight")->capture_default_str();
  evo->add_option("--trace", evo_trace, "Trace CSV output")->capture_default_str();

  std::filesystem::path exp_config, exp_out;
  auto* exp = app.add_subcommand("experiment", "Run the GA x crossover x scenario matrix");
  exp->add_option("--config", exp_config, "Experiment config file")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen) {
      const Scenario s = generate_scenario(gp, parse_candidate_policy(policy));
      save_scenario(s, gen_out);
      std::cout << "wrote " << gen_out.string() << ": " << s.node_count() << " nodes, "
                << s.adhoc_edges.size() << " ad-hoc edges, " << s.candidate_pairs.size()
                << " candidate pairs\n";
    } else if (*met) {
      const Scenario s = load_scenario(met_scenario);
      Genome g(s.candidate_pairs.size());
      if (!met_genome.empty()) g = Genome::from_string(met_genome);
      const MetricsReport m = metrics(decode(g, s));
      std::cout << "gamma=" << real(m.gamma) << '\n'
                << "L=" << real(m.L) << '\n'
                << "components=" << m.component_count << '\n'
                << "connected_ratio=" << real(m.connected_pair_ratio) << '\n';
    } else if (*evo) {
      const Scenario s = load_scenario(evo_scenario);
      ga.variant = parse_variant(evo_variant);
      ga.crossover = parse_crossover(evo_crossover);
      const RunResult r = run(ga, s);
      write_trace_csv(r.trace, evo_trace);
      std::cout << "best scalar=" << real(r.best_fitness.scalar)
                << " gamma=" << real(r.best_fitness.gamma) << " L=" << real(r.best_fitness.L)
                << " bypass=" << r.best_fitness.bypass_count
                << " evaluations=" << r.evaluations_used
                << " genome=" << r.best_genome.to_string() << '\n';
    } else if (*exp) {
      ExperimentConfig cfg = load_experiment_config(exp_config);
      cfg.output_dir = exp_out;
      const ExperimentReport report = run_experiment(cfg);
      for (const auto& name : report.scenario_names()) {
        std::cout << name << ':';
        for (const auto& c : rank_combos(report, name)) {
          std::cout << ' ' << label(c) << '=' << real(report.find(name, c)->mean);
        }
        std::cout << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
