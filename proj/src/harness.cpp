#include "injnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "injnet/error.hpp"

namespace injnet {

namespace {

constexpr std::string_view kConfigHeader = "injection-experiment v1";

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Order-independent mean: summing sorted values makes the result invariant
// under any permutation of the runs.
double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

bool row_less(const ComboStats& a, const ComboStats& b) {
  auto key = [](const ComboStats& r) {
    return std::tuple(r.nodes, r.partitions, r.scenario, std::string(to_string(r.combo.variant)),
                      std::string(to_string(r.combo.crossover)));
  };
  return key(a) < key(b);
}

template <class T>
T parse_value(const std::string& tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw MalformedFile(line, std::string("bad ") + what + " '" + tok + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string label(const Combo& c) {
  return std::string(to_string(c.variant)) + "/" + std::string(to_string(c.crossover));
}

std::vector<ScenarioParams> default_experiment_scenarios() {
  // A single unit-disk cluster narrower than half the radio range is a clique
  // with no candidate pairs, so the one-partition setting uses a wider disk.
  return {
      {30, 5, 0.15, 1.0, 0.05, 1},
      {42, 3, 0.15, 1.0, 0.05, 1},
      {70, 1, 0.15, 1.0, 0.25, 1},
  };
}

std::vector<Combo> all_combos() {
  return {
      {Variant::kGenerational, Crossover::kTwoPoint},
      {Variant::kGenerational, Crossover::kUniform},
      {Variant::kSteadyState, Crossover::kTwoPoint},
      {Variant::kSteadyState, Crossover::kUniform},
  };
}

void ExperimentConfig::validate() const {
  if (runs_per_combo < 1) throw std::invalid_argument("runs_per_combo must be >= 1");
  if (combos.empty()) throw std::invalid_argument("at least one combo is required");
  for (const auto& p : scenarios) p.validate();
  base.validate();
}

std::string scenario_name(const ScenarioParams& p) {
  return "n" + std::to_string(p.node_count) + "_k" + std::to_string(p.partition_count);
}

const ComboStats* ExperimentReport::find(const std::string& scenario, const Combo& c) const {
  for (const auto& r : rows) {
    if (r.scenario == scenario && r.combo == c) return &r;
  }
  return nullptr;
}

std::vector<std::string> ExperimentReport::scenario_names() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.scenario) == out.end()) out.push_back(r.scenario);
  }
  return out;
}

ComboStats aggregate(const ScenarioParams& p, const Combo& combo,
                     const std::vector<RunResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("cannot aggregate zero runs");
  ComboStats s;
  s.scenario = scenario_name(p);
  s.nodes = p.node_count;
  s.partitions = p.partition_count;
  s.combo = combo;
  s.runs = runs.size();

  std::vector<double> gammas, Ls, bypass;
  for (const auto& r : runs) {
    s.finals.push_back(r.best_fitness.scalar);
    gammas.push_back(r.best_fitness.gamma);
    Ls.push_back(r.best_fitness.L);
    bypass.push_back(static_cast<double>(r.best_fitness.bypass_count));
  }
  s.min = *std::min_element(s.finals.begin(), s.finals.end());
  s.max = *std::max_element(s.finals.begin(), s.finals.end());
  s.mean = std::clamp(sorted_mean(s.finals), s.min, s.max);
  if (runs.size() > 1) {
    std::vector<double> sq;
    for (double x : s.finals) sq.push_back((x - s.mean) * (x - s.mean));
    s.std = std::sqrt(sorted_mean(sq) * static_cast<double>(sq.size()) /
                      static_cast<double>(sq.size() - 1));
  }
  s.mean_gamma = sorted_mean(gammas);
  s.mean_L = sorted_mean(Ls);
  s.mean_bypass = sorted_mean(bypass);

  const auto& ref = runs.front().trace;
  for (const auto& r : runs) {
    if (r.trace.size() != ref.size()) throw Error("runs have misaligned trace checkpoints");
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (r.trace[i].evaluations != ref[i].evaluations) {
        throw Error("runs have misaligned trace checkpoints");
      }
    }
  }
  // Order statistics of non-decreasing curves are non-decreasing and
  // rounding is monotone, so the sorted-sum means stay non-decreasing.
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::vector<double> col;
    for (const auto& r : runs) col.push_back(r.trace[i].best_scalar);
    s.mean_trace.push_back({ref[i].evaluations, sorted_mean(std::move(col))});
  }
  return s;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<Scenario> scenarios;
  for (const auto& p : cfg.scenarios) scenarios.push_back(generate_scenario(p, cfg.policy));

  struct Task {
    std::size_t scenario, combo, run;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (std::size_t c = 0; c < cfg.combos.size(); ++c) {
      for (std::size_t r = 0; r < cfg.runs_per_combo; ++r) tasks.push_back({s, c, r});
    }
  }
  std::vector<RunResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      GaConfig ga = cfg.base;
      ga.variant = cfg.combos[t.combo].variant;
      ga.crossover = cfg.combos[t.combo].crossover;
      ga.seed = cfg.base_seed + t.run;
      try {
        results[i] = run(ga, scenarios[t.scenario]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i]) continue;
    const Task& t = tasks[i];
    std::string where = scenario_name(cfg.scenarios[t.scenario]) + " " +
                        label(cfg.combos[t.combo]) + " run " + std::to_string(t.run);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error(where + ": " + e.what());
    }
  }

  ExperimentReport report;
  std::map<std::string, int> seen_names;
  std::size_t i = 0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::string name = scenario_name(cfg.scenarios[s]);
    if (int dup = seen_names[name]++; dup > 0) name += "_" + std::to_string(dup + 1);
    for (std::size_t c = 0; c < cfg.combos.size(); ++c) {
      std::vector<RunResult> runs(results.begin() + static_cast<std::ptrdiff_t>(i),
                                  results.begin() + static_cast<std::ptrdiff_t>(i + cfg.runs_per_combo));
      i += cfg.runs_per_combo;
      ComboStats st = aggregate(cfg.scenarios[s], cfg.combos[c], runs);
      st.scenario = name;
      report.rows.push_back(std::move(st));
    }
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), row_less);

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    emit_csv(report, cfg.output_dir / "report.csv");
    {
      std::ofstream out(cfg.output_dir / "ranking.csv", std::ios::binary);
      if (!out) throw Error("cannot write ranking.csv");
      emit_ranking_csv(report, out);
    }
    for (const auto& name : report.scenario_names()) {
      emit_convergence_svg(report, name, cfg.output_dir / ("convergence_" + name + ".svg"));
    }
  }
  return report;
}

std::vector<Combo> rank_combos(const ExperimentReport& report, const std::string& scenario) {
  std::vector<const ComboStats*> rows;
  for (const auto& r : report.rows) {
    if (r.scenario == scenario) rows.push_back(&r);
  }
  if (rows.empty()) throw std::invalid_argument("unknown scenario '" + scenario + "'");
  std::stable_sort(rows.begin(), rows.end(), [](const ComboStats* a, const ComboStats* b) {
    if (a->mean != b->mean) return a->mean > b->mean;
    return label(a->combo) < label(b->combo);
  });
  std::vector<Combo> out;
  for (const auto* r : rows) out.push_back(r->combo);
  return out;
}

void emit_csv(const ExperimentReport& report, std::ostream& out) {
  std::vector<const ComboStats*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComboStats* a, const ComboStats* b) { return row_less(*a, *b); });
  out << kReportCsvHeader << '\n';
  for (const auto* r : rows) {
    out << r->scenario << ',' << r->nodes << ',' << r->partitions << ','
        << to_string(r->combo.variant) << ',' << to_string(r->combo.crossover) << ',' << r->runs
        << ',' << fixed6(r->mean) << ',' << fixed6(r->std) << ',' << fixed6(r->min) << ','
        << fixed6(r->max) << ',' << fixed6(r->mean_gamma) << ',' << fixed6(r->mean_L) << ','
        << fixed6(r->mean_bypass) << '\n';
  }
}

void emit_csv(const ExperimentReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  emit_csv(report, out);
  if (!out) throw Error("write failed: " + path.string());
}

ExperimentReport parse_report_csv(std::istream& in) {
  std::string line;
  std::size_t ln = 1;
  if (!std::getline(in, line) || line != kReportCsvHeader) {
    throw MalformedFile(ln, "missing report header");
  }
  ExperimentReport report;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw MalformedFile(ln, "expected 13 fields");
    ComboStats r;
    r.scenario = f[0];
    r.nodes = parse_value<std::size_t>(f[1], ln, "nodes");
    r.partitions = parse_value<std::size_t>(f[2], ln, "partitions");
    try {
      r.combo = {parse_variant(f[3]), parse_crossover(f[4])};
    } catch (const std::invalid_argument& e) {
      throw MalformedFile(ln, e.what());
    }
    r.runs = parse_value<std::size_t>(f[5], ln, "runs");
    double* dst[] = {&r.mean, &r.std, &r.min, &r.max, &r.mean_gamma, &r.mean_L, &r.mean_bypass};
    for (std::size_t k = 0; k < 7; ++k) *dst[k] = parse_value<double>(f[6 + k], ln, "real");
    report.rows.push_back(std::move(r));
  }
  return report;
}

void emit_convergence_svg(const ExperimentReport& report, const std::string& scenario,
                          std::ostream& out) {
  std::vector<const ComboStats*> rows;
  for (const auto& r : report.rows) {
    if (r.scenario == scenario) rows.push_back(&r);
  }
  if (rows.empty()) throw std::invalid_argument("unknown scenario '" + scenario + "'");

  constexpr double kW = 800, kH = 500, kLeft = 80, kRight = 220, kTop = 40, kBottom = 60;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  static constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double xmax = 1, ylo = 1e300, yhi = -1e300;
  for (const auto* r : rows) {
    for (const auto& p : r->mean_trace) {
      xmax = std::max(xmax, static_cast<double>(p.evaluations));
      ylo = std::min(ylo, p.best_scalar);
      yhi = std::max(yhi, p.best_scalar);
    }
  }
  if (ylo > yhi) ylo = 0, yhi = 1;
  if (yhi - ylo < 1e-9) ylo -= 0.005, yhi += 0.005;
  auto sx = [&](double x) { return kLeft + plot_w * x / xmax; };
  auto sy = [&](double y) { return kTop + plot_h * (1.0 - (y - ylo) / (yhi - ylo)); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << scenario << "</text>\n";
  out << "  <g stroke=\"black\" stroke-width=\"1\">\n"
      << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n"
      << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n  </g>\n";
  out << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmax * t / 4.0;
    const double yv = ylo + (yhi - ylo) * t / 4.0;
    out << "    <text x=\"" << sx(xv) << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << static_cast<long long>(std::llround(xv)) << "</text>\n";
    out << "    <text x=\"" << kLeft - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
        << fixed6(yv).substr(0, 6) << "</text>\n";
  }
  out << "  </g>\n";
  out << "  <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">evaluations</text>\n";
  out << "  <text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 18 " << kTop + plot_h / 2
      << ")\" font-family=\"sans-serif\" font-size=\"13\">mean best fitness</text>\n";

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
        << "data-combo=\"" << label(rows[i]->combo) << "\" points=\"";
    for (std::size_t k = 0; k < rows[i]->mean_trace.size(); ++k) {
      const auto& p = rows[i]->mean_trace[k];
      if (k) out << ' ';
      out << sx(static_cast<double>(p.evaluations)) << ',' << sy(p.best_scalar);
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    out << "  <line x1=\"" << kLeft + plot_w + 16 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << kLeft + plot_w + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label(rows[i]->combo)
        << "</text>\n";
  }
  out << "</svg>\n";
}

void emit_convergence_svg(const ExperimentReport& report, const std::string& scenario,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  emit_convergence_svg(report, scenario, out);
  if (!out) throw Error("write failed: " + path.string());
}

void emit_ranking_csv(const ExperimentReport& report, std::ostream& out) {
  out << "scenario,rank,variant,crossover,mean\n";
  for (const auto& name : report.scenario_names()) {
    const auto ranked = rank_combos(report, name);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      out << name << ',' << i + 1 << ',' << to_string(ranked[i].variant) << ','
          << to_string(ranked[i].crossover) << ',' << fixed6(report.find(name, ranked[i])->mean)
          << '\n';
    }
  }
}

void write_trace_csv(const std::vector<TracePoint>& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "evaluations,best_scalar\n";
  for (const auto& p : trace) out << p.evaluations << ',' << real17(p.best_scalar) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

ExperimentConfig load_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<ScenarioParams> scenarios;
  std::vector<bool> explicit_seed;
  std::vector<Combo> combos;
  bool header = false;
  std::string text;
  std::size_t ln = 0;
  while (std::getline(in, text)) {
    ++ln;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream ss(text);
    std::vector<std::string> t;
    for (std::string w; ss >> w;) t.push_back(w);
    if (t.empty() || t[0].front() == '#') continue;
    if (!header) {
      if (text == kConfigHeader) {
        header = true;
        continue;
      }
      if (t[0] == "injection-experiment") throw VersionMismatch("unsupported config version: '" + text + "'");
      throw MalformedFile(ln, "missing 'injection-experiment v1' header");
    }
    const std::string& key = t[0];
    auto need = [&](std::size_t n) {
      if (t.size() != n + 1) {
        throw MalformedFile(ln, "'" + key + "' takes " + std::to_string(n) + " value(s)");
      }
    };
    try {
      if (key == "scenario") {
        if (t.size() % 2 != 1) throw MalformedFile(ln, "scenario takes key/value pairs");
        ScenarioParams p;
        bool has_seed = false;
        bool has_nodes = false, has_parts = false;
        for (std::size_t i = 1; i < t.size(); i += 2) {
          const std::string& k = t[i];
          const std::string& v = t[i + 1];
          if (k == "nodes") p.node_count = parse_value<std::size_t>(v, ln, "nodes"), has_nodes = true;
          else if (k == "partitions") p.partition_count = parse_value<std::size_t>(v, ln, "partitions"), has_parts = true;
          else if (k == "range") p.radio_range = parse_value<double>(v, ln, "range");
          else if (k == "side") p.area_side = parse_value<double>(v, ln, "side");
          else if (k == "cluster_radius") p.cluster_radius = parse_value<double>(v, ln, "cluster_radius");
          else if (k == "seed") p.seed = parse_value<std::uint64_t>(v, ln, "seed"), has_seed = true;
          else throw MalformedFile(ln, "unknown scenario key '" + k + "'");
        }
        if (!has_nodes || !has_parts) throw MalformedFile(ln, "scenario needs nodes and partitions");
        p.validate();
        scenarios.push_back(p);
        explicit_seed.push_back(has_seed);
      } else if (key == "combo") {
        need(2);
        combos.push_back({parse_variant(t[1]), parse_crossover(t[2])});
      } else if (key == "runs") {
        need(1);
        cfg.runs_per_combo = parse_value<std::size_t>(t[1], ln, "runs");
      } else if (key == "base_seed") {
        need(1);
        cfg.base_seed = parse_value<std::uint64_t>(t[1], ln, "base_seed");
      } else if (key == "population") {
        need(1);
        cfg.base.population_size = parse_value<std::size_t>(t[1], ln, "population");
      } else if (key == "evaluations") {
        need(1);
        cfg.base.max_evaluations = parse_value<std::size_t>(t[1], ln, "evaluations");
      } else if (key == "crossover_probability") {
        need(1);
        cfg.base.crossover_probability = parse_value<double>(t[1], ln, "crossover_probability");
      } else if (key == "mutation_rate") {
        need(1);
        if (t[1] == "auto") cfg.base.mutation_rate.reset();
        else cfg.base.mutation_rate = parse_value<double>(t[1], ln, "mutation_rate");
      } else if (key == "tournament") {
        need(1);
        cfg.base.tournament_size = parse_value<std::size_t>(t[1], ln, "tournament");
      } else if (key == "elitism") {
        need(1);
        cfg.base.elitism_count = parse_value<std::size_t>(t[1], ln, "elitism");
      } else if (key == "weights") {
        need(3);
        cfg.base.weights = {parse_value<double>(t[1], ln, "weight"),
                            parse_value<double>(t[2], ln, "weight"),
                            parse_value<double>(t[3], ln, "weight")};
      } else if (key == "policy") {
        need(1);
        cfg.policy = parse_candidate_policy(t[1]);
      } else if (key == "threads") {
        need(1);
        cfg.threads = parse_value<unsigned>(t[1], ln, "threads");
      } else {
        throw MalformedFile(ln, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw MalformedFile(ln, e.what());
    }
  }
  if (!header) throw MalformedFile(ln + 1, "missing 'injection-experiment v1' header");

  if (scenarios.empty()) {
    scenarios = default_experiment_scenarios();
    explicit_seed.assign(scenarios.size(), false);
  }
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!explicit_seed[i]) scenarios[i].seed = cfg.base_seed;
  }
  cfg.scenarios = std::move(scenarios);
  if (!combos.empty()) cfg.combos = std::move(combos);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw MalformedFile(ln, e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_experiment_config(in);
}

}  // namespace injnet
