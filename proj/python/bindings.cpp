#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "injnet/error.hpp"
#include "injnet/evolve.hpp"
#include "injnet/graph.hpp"
#include "injnet/harness.hpp"
#include "injnet/scenario.hpp"

namespace py = pybind11;
using namespace injnet;

namespace {

py::list distances_to_py(const DistanceMatrix& d) {
  py::list rows;
  for (NodeId u = 0; u < d.size(); ++u) {
    py::list row;
    for (NodeId v = 0; v < d.size(); ++v) {
      if (d.reachable(u, v)) row.append(d.at(u, v));
      else row.append(py::none());
    }
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bypass-link optimization for partitioned ad hoc networks";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<MalformedFile>(m, "MalformedFile", error.ptr());
  py::register_exception<VersionMismatch>(m, "VersionMismatch", error.ptr());
  py::register_exception<InfeasibleGeometry>(m, "InfeasibleGeometry", error.ptr());
  py::register_exception<DegenerateScenario>(m, "DegenerateScenario", error.ptr());

  py::enum_<EdgeKind>(m, "EdgeKind")
      .value("ADHOC", EdgeKind::kAdHoc)
      .value("BYPASS", EdgeKind::kBypass);

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("node_count"))
      .def("add_edge", &Graph::add_edge, py::arg("u"), py::arg("v"),
           py::arg("kind") = EdgeKind::kAdHoc)
      .def("has_edge", &Graph::has_edge)
      .def("degree", &Graph::degree)
      .def("neighbors", &Graph::neighbors)
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("edges", [](const Graph& g) {
        std::vector<std::tuple<NodeId, NodeId, EdgeKind>> out;
        for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.kind);
        return out;
      });

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("gamma", &MetricsReport::gamma)
      .def_readonly("L", &MetricsReport::L)
      .def_readonly("component_count", &MetricsReport::component_count)
      .def_readonly("connected_pair_ratio", &MetricsReport::connected_pair_ratio)
      .def_readonly("node_count", &MetricsReport::node_count)
      .def_readonly("edge_count", &MetricsReport::edge_count);

  m.def("connected_components", &connected_components);
  m.def("local_clustering", &local_clustering);
  m.def("clustering_coefficient", &clustering_coefficient);
  m.def("all_pairs_distances", [](const Graph& g) { return distances_to_py(all_pairs_distances(g)); },
        "Hop counts; None marks unreachable pairs");
  m.def("characteristic_path_length",
        py::overload_cast<const Graph&>(&characteristic_path_length));
  m.def("metrics", &metrics);

  py::enum_<CandidatePolicy>(m, "CandidatePolicy")
      .value("ALL_NON_ADJACENT", CandidatePolicy::kAllNonAdjacent)
      .value("INTER_PARTITION_ONLY", CandidatePolicy::kInterPartitionOnly);

  py::class_<ScenarioParams>(m, "ScenarioParams")
      .def(py::init([](std::size_t nodes, std::size_t partitions, double range, double side,
                       double cluster_radius, std::uint64_t seed) {
             return ScenarioParams{nodes, partitions, range, side, cluster_radius, seed};
           }),
           py::arg("node_count") = 30, py::arg("partition_count") = 5,
           py::arg("radio_range") = 0.15, py::arg("area_side") = 1.0,
           py::arg("cluster_radius") = 0.05, py::arg("seed") = 1)
      .def_readwrite("node_count", &ScenarioParams::node_count)
      .def_readwrite("partition_count", &ScenarioParams::partition_count)
      .def_readwrite("radio_range", &ScenarioParams::radio_range)
      .def_readwrite("area_side", &ScenarioParams::area_side)
      .def_readwrite("cluster_radius", &ScenarioParams::cluster_radius)
      .def_readwrite("seed", &ScenarioParams::seed);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("params", &Scenario::params)
      .def_property_readonly("positions",
                             [](const Scenario& s) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : s.positions) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def_readonly("adhoc_edges", &Scenario::adhoc_edges)
      .def_readonly("candidate_pairs", &Scenario::candidate_pairs)
      .def_readonly("policy", &Scenario::policy)
      .def_property_readonly("node_count", &Scenario::node_count)
      .def("adhoc_graph", &Scenario::adhoc_graph)
      .def("save", [](const Scenario& s, const std::filesystem::path& p) { save_scenario(s, p); })
      .def("to_text", [](const Scenario& s) {
        std::ostringstream out;
        save_scenario(s, out);
        return out.str();
      })
      .def(py::self == py::self);

  m.def("generate_scenario", &generate_scenario, py::arg("params"),
        py::arg("policy") = CandidatePolicy::kAllNonAdjacent);
  m.def("candidate_pairs", &candidate_pairs);
  m.def("load_scenario", py::overload_cast<const std::filesystem::path&>(&load_scenario));
  m.def("load_scenario_text", [](const std::string& text) {
    std::istringstream in(text);
    return load_scenario(in);
  });

  py::class_<Genome>(m, "Genome")
      .def(py::init<std::size_t, bool>(), py::arg("length"), py::arg("value") = false)
      .def_static("from_string", &Genome::from_string)
      .def("__str__", &Genome::to_string)
      .def("__len__", &Genome::size)
      .def("__getitem__", [](const Genome& g, std::size_t i) {
        if (i >= g.size()) throw py::index_error();
        return g[i];
      })
      .def("popcount", &Genome::popcount)
      .def(py::self == py::self);

  py::class_<FitnessWeights>(m, "FitnessWeights")
      .def(py::init([](double g, double l, double b) { return FitnessWeights{g, l, b}; }),
           py::arg("w_gamma") = 0.4, py::arg("w_L") = 0.4, py::arg("w_B") = 0.2)
      .def_readwrite("w_gamma", &FitnessWeights::w_gamma)
      .def_readwrite("w_L", &FitnessWeights::w_L)
      .def_readwrite("w_B", &FitnessWeights::w_B);

  py::class_<FitnessValue>(m, "FitnessValue")
      .def_readonly("scalar", &FitnessValue::scalar)
      .def_readonly("gamma", &FitnessValue::gamma)
      .def_readonly("L", &FitnessValue::L)
      .def_readonly("L_norm", &FitnessValue::L_norm)
      .def_readonly("bypass_count", &FitnessValue::bypass_count);

  m.def("decode", &decode);
  m.def("evaluate", &evaluate, py::arg("genome"), py::arg("scenario"),
        py::arg("weights") = FitnessWeights{});

  py::enum_<Variant>(m, "Variant")
      .value("GENERATIONAL", Variant::kGenerational)
      .value("STEADY_STATE", Variant::kSteadyState);
  py::enum_<Crossover>(m, "Crossover")
      .value("TWO_POINT", Crossover::kTwoPoint)
      .value("UNIFORM", Crossover::kUniform);

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("variant", &GaConfig::variant)
      .def_readwrite("crossover", &GaConfig::crossover)
      .def_readwrite("population_size", &GaConfig::population_size)
      .def_readwrite("crossover_probability", &GaConfig::crossover_probability)
      .def_readwrite("mutation_rate", &GaConfig::mutation_rate)
      .def_readwrite("tournament_size", &GaConfig::tournament_size)
      .def_readwrite("max_evaluations", &GaConfig::max_evaluations)
      .def_readwrite("elitism_count", &GaConfig::elitism_count)
      .def_readwrite("weights", &GaConfig::weights)
      .def_readwrite("seed", &GaConfig::seed);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("best_genome", &RunResult::best_genome)
      .def_readonly("best_fitness", &RunResult::best_fitness)
      .def_property_readonly("trace",
                             [](const RunResult& r) {
                               std::vector<std::pair<std::size_t, double>> out;
                               for (const auto& p : r.trace) out.emplace_back(p.evaluations, p.best_scalar);
                               return out;
                             })
      .def_readonly("evaluations_used", &RunResult::evaluations_used);

  m.def("run", &run, py::arg("config"), py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<Combo>(m, "Combo")
      .def(py::init([](Variant v, Crossover c) { return Combo{v, c}; }))
      .def_readwrite("variant", &Combo::variant)
      .def_readwrite("crossover", &Combo::crossover)
      .def("__str__", &label)
      .def(py::self == py::self);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("scenarios", &ExperimentConfig::scenarios)
      .def_readwrite("combos", &ExperimentConfig::combos)
      .def_readwrite("runs_per_combo", &ExperimentConfig::runs_per_combo)
      .def_readwrite("base", &ExperimentConfig::base)
      .def_readwrite("base_seed", &ExperimentConfig::base_seed)
      .def_readwrite("policy", &ExperimentConfig::policy)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("threads", &ExperimentConfig::threads);

  py::class_<ComboStats>(m, "ComboStats")
      .def_readonly("scenario", &ComboStats::scenario)
      .def_readonly("nodes", &ComboStats::nodes)
      .def_readonly("partitions", &ComboStats::partitions)
      .def_readonly("combo", &ComboStats::combo)
      .def_readonly("runs", &ComboStats::runs)
      .def_readonly("mean", &ComboStats::mean)
      .def_readonly("std", &ComboStats::std)
      .def_readonly("min", &ComboStats::min)
      .def_readonly("max", &ComboStats::max)
      .def_readonly("mean_gamma", &ComboStats::mean_gamma)
      .def_readonly("mean_L", &ComboStats::mean_L)
      .def_readonly("mean_bypass", &ComboStats::mean_bypass)
      .def_readonly("finals", &ComboStats::finals);

  py::class_<ExperimentReport>(m, "ExperimentReport")
      .def_readonly("rows", &ExperimentReport::rows)
      .def("scenario_names", &ExperimentReport::scenario_names)
      .def("to_csv", [](const ExperimentReport& r) {
        std::ostringstream out;
        emit_csv(r, out);
        return out.str();
      });

  m.def("load_experiment_config",
        py::overload_cast<const std::filesystem::path&>(&load_experiment_config));
  m.def("run_experiment", &run_experiment, py::call_guard<py::gil_scoped_release>());
  m.def("rank_combos", &rank_combos);
  m.def("scenario_name", &scenario_name);
}
