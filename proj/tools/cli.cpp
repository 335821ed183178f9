#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "genus/circulation.hpp"
#include "genus/error.hpp"
#include "genus/estimator.hpp"
#include "genus/exact.hpp"
#include "genus/generators.hpp"
#include "genus/kernels.hpp"
#include "genus/map_io.hpp"
#include "genus/report.hpp"
#include "genus/simulator.hpp"
#include "genus/verify.hpp"

namespace genus::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Everything a command needs; filled from --config first, then flags.
struct ExperimentSpec {
  std::string map_path;
  std::string generator;
  std::vector<NodeId> probe;  // empty: node 0 and its neighbours
  std::optional<double> p;
  std::string schedule = "round";
  std::string mode = "practical";
  double epsilon = EstimateConfig::kPracticalEpsilon;
  long T_prime = EstimateConfig::kPracticalTPrime;
  long T = EstimateConfig::kPracticalT;
  int g_bar = 2;
  long n_bar = 0;  // 0: n + m + f
  long steps = 0;
  long stride = 1;
  int trials = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool instrument = false;
  int synthetic_dim = -1;
  int m0 = 16;
  std::optional<double> noise;
  std::string suite = "all";
  int circulations = 20;
  std::vector<long> times{10, 50, 100, 200};
  long max_steps = 2'000'000'000;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<NodeId> parse_node_list(const std::string& text) {
  std::vector<NodeId> nodes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      nodes.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad node id '" + item + "' in --probe");
    }
  }
  return nodes;
}

// Binds a flag to a spec field and remembers how to read the same field
// from a config document when the flag is absent.
class Binder {
 public:
  explicit Binder(ExperimentSpec& spec) : spec_(spec) {}

  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, T& field,
                   const std::string& help) {
    CLI::Option* opt = app->add_option(flag, field, help);
    fields_.push_back({app, opt, key, [&field](const json& v) { field = v.get<T>(); }});
    return opt;
  }

  template <typename T>
  CLI::Option* add_optional(CLI::App* app, const std::string& flag, const std::string& key,
                            std::optional<T>& field, const std::string& help) {
    CLI::Option* opt = app->add_option_function<T>(flag, [&field](const T& v) { field = v; }, help);
    fields_.push_back({app, opt, key, [&field](const json& v) { field = v.get<T>(); }});
    return opt;
  }

  CLI::Option* add_probe(CLI::App* app) {
    CLI::Option* opt = app->add_option_function<std::string>(
        "--probe", [this](const std::string& v) { spec_.probe = parse_node_list(v); },
        "observed node set U as \"v1,v2,...\" (default: node 0 and its neighbours)");
    fields_.push_back({app, opt, "probe", [this](const json& v) {
                         spec_.probe = v.is_string() ? parse_node_list(v.get<std::string>())
                                                     : v.get<std::vector<NodeId>>();
                       }});
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& flag, const std::string& key, bool& field,
                        const std::string& help) {
    CLI::Option* opt = app->add_flag(flag, field, help);
    fields_.push_back({app, opt, key, [&field](const json& v) { field = v.get<bool>(); }});
    return opt;
  }

  /// Fills fields whose flag was not given on the command line.
  void apply_config(const json& config, const CLI::App* active) const {
    for (const auto& f : fields_) {
      if (f.app != active || f.option->count() > 0 || !config.contains(f.key)) continue;
      try {
        f.assign(config.at(f.key));
      } catch (const json::exception& e) {
        throw UsageError("config key '" + f.key + "': " + e.what());
      }
    }
  }

 private:
  struct Field {
    const CLI::App* app;
    CLI::Option* option;
    std::string key;
    std::function<void(const json&)> assign;
  };
  ExperimentSpec& spec_;
  std::vector<Field> fields_;
};

struct LoadedMap {
  std::string name;
  CombinatorialMap map;
};

LoadedMap load(const ExperimentSpec& spec) {
  if (!spec.map_path.empty() && !spec.generator.empty()) throw UsageError("give either --map or --generate, not both");
  if (!spec.map_path.empty()) return {spec.map_path, load_map(spec.map_path)};
  if (!spec.generator.empty()) return {spec.generator, generate(spec.generator)};
  throw UsageError("a map is required (--map FILE or --generate kind:params)");
}

json map_source(const ExperimentSpec& spec) {
  if (!spec.map_path.empty()) return {{"file", spec.map_path}};
  return {{"generate", spec.generator}};
}

std::uint64_t resolve_seed(ExperimentSpec& spec, std::ostream& err) {
  if (!spec.seed) {
    std::random_device device;
    spec.seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    err << "seed: " << *spec.seed << '\n';
  }
  return *spec.seed;
}

ProbeSet resolve_probe(const CombinatorialMap& map, const ExperimentSpec& spec) {
  return spec.probe.empty() ? neighbourhood_probe(map, 0) : make_probe(map, spec.probe);
}

Schedule parse_schedule(const std::string& name) {
  if (name == "round") return Schedule::RoundBased;
  if (name == "poisson") return Schedule::PoissonClocks;
  throw UsageError("unknown schedule '" + name + "' (round|poisson)");
}

// Adds provenance and writes the report to --out or `out`.
void emit(json report, const json& spec_doc, const ExperimentSpec& spec, std::ostream& out) {
  report["spec"] = spec_doc;
  report["spec_hash"] = spec_hash(spec_doc);
  if (spec.seed) report["seed"] = *spec.seed;
  const std::string text = report.dump(2) + "\n";
  if (spec.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(spec.out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + spec.out);
  file << text;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path.string());
  file << text;
}

// ---- commands ----

int cmd_map(const std::string& action, const ExperimentSpec& spec, std::ostream& out) {
  const LoadedMap loaded = load(spec);
  json doc;
  if (action == "info") {
    doc = {{"source", map_source(spec)}, {"stats", stats_to_json(loaded.map.stats())}};
  } else if (action == "generate") {
    doc = map_to_json(loaded.map);
  } else {
    doc = map_to_json(dual(loaded.map));
  }
  const std::string text = doc.dump(2) + "\n";
  if (spec.out.empty()) {
    out << text;
  } else {
    write_text(spec.out, text);
  }
  return kExitOk;
}

int cmd_basis(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const LoadedMap loaded = load(spec);
  const CombinatorialMap& map = loaded.map;
  const json spec_doc{{"command", "basis"}, {"map", map_source(spec)}};
  json report{{"stats", stats_to_json(map.stats())}};
  const CirculationSpace space(map);
  const Eigen::MatrixXd eta = smooth_projections(space);
  try {
    report["basis"] = basis_to_json(smooth_basis_from_projections(map, eta));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankMismatch) throw;
    err << e.what() << '\n';
    report["error"] = e.what();
    emit(report, spec_doc, spec, out);
    return kExitCheckFailed;
  }
  json exact{{"checked", false}};
  if (map.edge_count() <= kExactEdgeCap) {
    const ExactProjector projector(map);
    double worst = 0.0;
    for (EdgeId e = 0; e < map.edge_count(); ++e) {
      worst = std::max(worst, (to_double(projector.eta(e)) - eta.col(e)).lpNorm<Eigen::Infinity>());
    }
    exact = {{"checked", true}, {"max_abs_difference", worst}, {"agrees", worst <= 1e-9}};
  }
  report["exact_agreement"] = exact;
  emit(report, spec_doc, spec, out);
  return exact.value("agrees", true) ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const LoadedMap loaded = load(spec);
  const CombinatorialMap& map = loaded.map;
  const ProbeSet probe = resolve_probe(map, spec);
  const std::uint64_t seed = resolve_seed(spec, err);
  if (spec.trials < 1) throw UsageError("--trials must be at least 1");
  ProcessConfig config;
  config.p = spec.p.value_or(0.01);
  config.schedule = parse_schedule(spec.schedule);
  config.steps = spec.steps;
  config.record_stride = spec.stride;
  validate(config);

  const json spec_doc{{"command", "simulate"}, {"map", map_source(spec)}, {"probe", probe.nodes},
                      {"p", config.p}, {"schedule", spec.schedule}, {"steps", spec.steps},
                      {"stride", spec.stride}, {"trials", spec.trials}, {"seed", seed},
                      {"instrument", spec.instrument}};
  fs::path dir;
  if (!spec.out.empty()) {
    dir = spec.out;
    fs::create_directories(dir);
  }
  json trials = json::array();
  for (int i = 0; i < spec.trials; ++i) {
    config.seed = trial_seed(seed, i);
    ObservationTrace trace;
    json entry{{"trial", i}, {"seed", config.seed}};
    if (spec.instrument) {
      auto [t, inst] = instrumented_run(map, probe, config);
      trace = std::move(t);
      entry["max_xw_residual"] = inst.max_xw_residual;
      entry["max_smooth_drift"] = inst.max_smooth_drift;
      entry["final_smooth_norm"] = inst.smooth_norm.back();
      entry["final_error_norm"] = inst.error_norm.back();
      if (!dir.empty()) write_text(dir / ("instrument_" + std::to_string(i) + ".json"), instrumentation_to_json(inst).dump() + "\n");
    } else {
      trace = run(map, probe, config);
    }
    entry["excitations"] = trace.excitations.size();
    entry["final_y_norm"] = trace.y.back().norm();
    if (!dir.empty()) {
      std::ostringstream csv;
      write_trace_csv(csv, trace);
      write_text(dir / ("trace_" + std::to_string(i) + ".csv"), csv.str());
      entry["trace"] = "trace_" + std::to_string(i) + ".csv";
    }
    trials.push_back(std::move(entry));
  }
  std::sort(trials.begin(), trials.end(), [](const json& a, const json& b) { return a["seed"] < b["seed"]; });
  json report{{"stats", stats_to_json(map.stats())}, {"m0", probe.m0()}, {"trials", std::move(trials)}};
  ExperimentSpec report_spec = spec;
  if (!dir.empty()) report_spec.out = (dir / "report.json").string();
  emit(report, spec_doc, report_spec, out);
  return kExitOk;
}

json summarize(const std::vector<TrialOutcome>& outcomes, std::optional<int> truth) {
  std::map<int, int> votes;
  int failures = 0;
  int correct = 0;
  json trials = json::array();
  for (const auto& o : outcomes) {
    if (o.estimate.success) {
      ++votes[o.estimate.genus];
      if (truth && o.estimate.genus == *truth) ++correct;
    } else {
      ++failures;
    }
    trials.push_back({{"trial", o.trial}, {"seed", o.seed}, {"excitations", o.excitations},
                      {"estimate", to_json(o.estimate)}});
  }
  std::sort(trials.begin(), trials.end(), [](const json& a, const json& b) { return a["seed"] < b["seed"]; });
  json histogram = json::object();
  json majority = nullptr;
  int best = failures;  // a failure majority leaves the vote empty
  for (const auto& [g, count] : votes) {
    histogram[std::to_string(g)] = count;
    if (count > best) {
      best = count;
      majority = g;
    }
  }
  json summary{{"histogram", histogram}, {"failures", failures}, {"majority", majority},
               {"trials", std::move(trials)}};
  if (truth) {
    summary["true_genus"] = *truth;
    summary["successes"] = correct;
    summary["success_rate"] = static_cast<double>(correct) / static_cast<double>(outcomes.size());
  }
  return summary;
}

int cmd_estimate(ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(spec, err);
  if (spec.trials < 1) throw UsageError("--trials must be at least 1");

  if (spec.synthetic_dim >= 0) {
    if (spec.synthetic_dim > spec.m0) throw UsageError("--synthetic-dim exceeds --m0");
    const double noise = spec.noise.value_or(spec.epsilon / 8);
    EstimateConfig config = EstimateConfig::practical(0, spec.g_bar, spec.m0, 1.0, spec.epsilon, spec.T_prime, spec.T);
    const json spec_doc{{"command", "estimate"}, {"synthetic_dim", spec.synthetic_dim}, {"m0", spec.m0},
                        {"noise", noise}, {"epsilon", spec.epsilon}, {"T_prime", spec.T_prime},
                        {"T", spec.T}, {"g_bar", spec.g_bar}, {"trials", spec.trials}, {"seed", seed}};
    const auto outcomes = synthetic_trials(spec.m0, spec.synthetic_dim, noise, config, spec.trials, seed);
    std::optional<int> truth;
    if (spec.synthetic_dim % 2 == 0) truth = spec.synthetic_dim / 2;
    json report = summarize(outcomes, truth);
    report["config"] = to_json(config);
    emit(report, spec_doc, spec, out);
    return kExitOk;
  }

  const LoadedMap loaded = load(spec);
  const CombinatorialMap& map = loaded.map;
  const ProbeSet probe = resolve_probe(map, spec);
  const MapStats stats = map.stats();
  const long n_bar = spec.n_bar > 0 ? spec.n_bar : stats.n + stats.m + stats.f;
  const double mu = eigengap(map).mu;
  const double p = spec.p.value_or(practical_excitation_probability(mu, spec.epsilon));
  if (!(p > 0.0 && p <= 1.0)) throw UsageError("--p must lie in (0, 1]");

  EstimateConfig config;
  if (spec.mode == "paper") {
    config = EstimateConfig::paper_faithful(n_bar, spec.g_bar, probe.m0(), p);
  } else if (spec.mode == "practical") {
    config = EstimateConfig::practical(n_bar, spec.g_bar, probe.m0(), p, spec.epsilon, spec.T_prime, spec.T);
  } else {
    throw UsageError("unknown mode '" + spec.mode + "' (paper|practical)");
  }
  validate(config);
  const EstimateConfig reference = EstimateConfig::paper_faithful(n_bar, spec.g_bar, probe.m0(), p);

  const json spec_doc{{"command", "estimate"}, {"map", map_source(spec)}, {"probe", probe.nodes},
                      {"mode", spec.mode}, {"p", p}, {"epsilon", config.epsilon}, {"T_prime", config.T_prime},
                      {"T", config.T}, {"g_bar", spec.g_bar}, {"n_bar", n_bar},
                      {"schedule", spec.schedule}, {"trials", spec.trials}, {"seed", seed}};
  json paper{{"config", to_json(reference)},
             {"required_steps", static_cast<double>(reference.N) * static_cast<double>(reference.T)},
             {"note", "paper-faithful epsilon = n_bar^(-m0 n_bar) underflows double precision and needs "
                      "N*T steps per trial; these constants are not reproducible at desk scale"}};
  if (static_cast<double>(config.N) * static_cast<double>(config.T) > static_cast<double>(spec.max_steps)) {
    json report{{"stats", stats_to_json(stats)}, {"config", to_json(config)}, {"paper_faithful", paper},
                {"error", "run length N*T exceeds --max-steps"}};
    emit(report, spec_doc, spec, out);
    err << "run length N*T exceeds --max-steps; not simulated\n";
    return kExitUsage;
  }

  ProcessConfig process;
  process.p = p;
  process.schedule = parse_schedule(spec.schedule);
  const auto outcomes = estimate_trials(map, probe, process, config, spec.trials, seed);
  json report = summarize(outcomes, stats.g);
  report["stats"] = stats_to_json(stats);
  report["mu"] = mu;
  report["m0"] = probe.m0();
  report["config"] = to_json(config);
  report["paper_faithful"] = paper;
  report["error_budget"] = to_json(paper_error_budget(p, mu, config.epsilon / 4, spec.g_bar, config.N));
  emit(report, spec_doc, spec, out);
  return kExitOk;
}

int cmd_verify(ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kSuites{"nonvanish", "separation", "convergence"};
  std::vector<std::string> suites;
  if (spec.suite == "all") {
    suites = kSuites;
  } else if (spec.suite != "none") {
    if (std::find(kSuites.begin(), kSuites.end(), spec.suite) == kSuites.end()) {
      throw UsageError("unknown suite '" + spec.suite + "' (nonvanish|separation|convergence|all|none)");
    }
    suites = {spec.suite};
  }
  const bool custom_map = !spec.map_path.empty() || !spec.generator.empty();
  const bool random = std::any_of(suites.begin(), suites.end(), [](const std::string& s) { return s != "nonvanish"; });
  const std::uint64_t seed = random ? resolve_seed(spec, err) : 0;
  const int trials = spec.trials > 1 ? spec.trials : 500;

  json spec_doc{{"command", "verify"}, {"suite", spec.suite},
                {"map", custom_map ? map_source(spec) : json("corpus")}};
  if (random) {
    spec_doc["seed"] = seed;
    spec_doc["convergence_trials"] = trials;
    spec_doc["times"] = spec.times;
    spec_doc["circulations"] = spec.circulations;
  }
  auto maps_for = [&](const std::string& suite) {
    if (custom_map) {
      LoadedMap loaded = load(spec);
      return std::vector<std::pair<std::string, CombinatorialMap>>{{loaded.name, std::move(loaded.map)}};
    }
    if (suite == "separation") return separation_corpus();
    if (suite == "convergence") return std::vector<std::pair<std::string, CombinatorialMap>>{{"torus_grid:3", torus_grid(3)}};
    return standard_corpus();
  };

  bool all_passed = true;
  json report{{"suites", json::object()}};
  for (const auto& suite : suites) {
    json results = json::array();
    for (const auto& [name, map] : maps_for(suite)) {
      json entry{{"map", name}, {"genus", map.genus()}};
      if (suite == "nonvanish") {
        NonvanishOptions options;
        options.throw_on_failure = false;
        const auto r = nonvanish_check(map, options);
        entry["report"] = to_json(r);
        entry["passed"] = r.passed;
      } else if (suite == "separation") {
        if (map.genus() == 0) {
          entry["vacuous"] = true;
          entry["passed"] = true;
        } else {
          const SmoothBasis basis = smooth_basis(map);
          SeparationOptions options;
          options.throw_on_failure = false;
          bool passed = true;
          int components = 0;
          int worst_cut = 0;
          json failures = json::array();
          for (int i = 0; i < spec.circulations; ++i) {
            const std::uint64_t s = derive_seed(seed, Stream::Circulation, i);
            const NodeId v = static_cast<NodeId>(Rng(s).uniform_index(map.node_count()));
            const auto r = separation_check(map, forced_vanishing_circulation(map, basis, v, s), options);
            components += static_cast<int>(r.components.size());
            for (const auto& c : r.components) worst_cut = std::max(worst_cut, c.cut.size);
            if (!r.passed) {
              passed = false;
              failures.push_back(r.witness);
            }
          }
          entry["circulations"] = spec.circulations;
          entry["vanishing_components"] = components;
          entry["max_cut"] = worst_cut;
          entry["bound"] = 16 * map.genus();
          entry["passed"] = passed;
          if (!failures.empty()) entry["failures"] = failures;
        }
      } else {
        ConvergenceOptions options;
        options.throw_on_failure = false;
        options.trials = trials;
        options.times = spec.times;
        options.seed = seed;
        const auto r = convergence_check(map, options);
        entry["report"] = to_json(r);
        entry["passed"] = r.passed;
      }
      all_passed = all_passed && entry["passed"].get<bool>();
      results.push_back(std::move(entry));
    }
    report["suites"][suite] = std::move(results);
  }
  report["passed"] = all_passed;
  ExperimentSpec report_spec = spec;
  if (!random) report_spec.seed.reset();
  emit(report, spec_doc, report_spec, out);
  return all_passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentSpec spec;
  Binder bind(spec);
  std::string config_path;
  std::string map_action;

  CLI::App app{"Smooth circulations, the noisy circulator and local genus estimation", "genus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "genus 0.1.0");

  auto add_map_source = [&](CLI::App* sub) {
    bind.add(sub, "--map", "map", spec.map_path, "map JSON file");
    bind.add(sub, "--generate", "generate", spec.generator,
             "generator kind:params (planar_grid:K, torus_grid:K, canonical_polygon:G, cycle:K, edge, "
             "tetrahedron, subdivided:<spec>, blob:K:<spec>)");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with spec keys; flags override it");
    bind.add(sub, "--out", "out", spec.out, "output file (output directory for simulate)");
  };

  CLI::App* map_cmd = app.add_subcommand("map", "map info, generation and duals");
  map_cmd->add_option("action", map_action, "info | generate | dual")
      ->required()
      ->check(CLI::IsMember({"info", "generate", "dual"}));
  add_map_source(map_cmd);
  add_common(map_cmd);

  CLI::App* basis_cmd = app.add_subcommand("basis", "orthonormal basis of the smooth circulations");
  add_map_source(basis_cmd);
  add_common(basis_cmd);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the noisy circulator and write traces");
  add_map_source(sim_cmd);
  add_common(sim_cmd);
  bind.add_probe(sim_cmd);
  bind.add_optional(sim_cmd, "--p", "p", spec.p, "excitation probability per step (default 0.01)");
  bind.add(sim_cmd, "--steps", "steps", spec.steps, "number of steps")->required();
  bind.add(sim_cmd, "--stride", "stride", spec.stride, "record every k-th step");
  bind.add(sim_cmd, "--schedule", "schedule", spec.schedule, "round | poisson");
  bind.add(sim_cmd, "--trials", "trials", spec.trials, "independent runs");
  bind.add_optional(sim_cmd, "--seed", "seed", spec.seed, "seed (generated and printed when absent)");
  bind.add_flag(sim_cmd, "--instrument", "instrument", spec.instrument, "also write per-step decay instrumentation");

  CLI::App* est_cmd = app.add_subcommand("estimate", "simulate, aggregate and estimate the genus");
  add_map_source(est_cmd);
  add_common(est_cmd);
  bind.add_probe(est_cmd);
  bind.add_optional(est_cmd, "--p", "p", spec.p, "excitation probability (default from the spectral gap)");
  bind.add(est_cmd, "--mode", "mode", spec.mode, "practical | paper");
  bind.add(est_cmd, "--epsilon", "epsilon", spec.epsilon, "distance threshold (practical mode)");
  bind.add(est_cmd, "--t-prime", "T_prime", spec.T_prime, "stop threshold on |H(k)| (practical mode)");
  bind.add(est_cmd, "--samples", "T", spec.T, "number of aggregated samples T (practical mode)");
  bind.add(est_cmd, "--g-bar", "g_bar", spec.g_bar, "upper bound on the genus");
  bind.add(est_cmd, "--n-bar", "n_bar", spec.n_bar, "upper bound on n + m + f (default exact)");
  bind.add(est_cmd, "--schedule", "schedule", spec.schedule, "round | poisson");
  bind.add(est_cmd, "--trials", "trials", spec.trials, "independent trials");
  bind.add_optional(est_cmd, "--seed", "seed", spec.seed, "seed (generated and printed when absent)");
  bind.add(est_cmd, "--max-steps", "max_steps", spec.max_steps, "refuse runs longer than this");
  bind.add(est_cmd, "--synthetic-dim", "synthetic_dim", spec.synthetic_dim,
           "estimate from synthetic samples of a random subspace of this dimension instead of a map");
  bind.add(est_cmd, "--m0", "m0", spec.m0, "ambient dimension of synthetic samples");
  bind.add_optional(est_cmd, "--noise", "noise", spec.noise, "synthetic noise bound (default epsilon / 8)");

  CLI::App* ver_cmd = app.add_subcommand("verify", "run verifier suites over the corpus or one map");
  add_map_source(ver_cmd);
  add_common(ver_cmd);
  bind.add(ver_cmd, "--suite", "suite", spec.suite, "nonvanish | separation | convergence | all | none");
  bind.add(ver_cmd, "--trials", "trials", spec.trials, "convergence trials (default 500)");
  bind.add(ver_cmd, "--times", "times", spec.times, "convergence sample times");
  bind.add(ver_cmd, "--circulations", "circulations", spec.circulations, "circulations per map (separation)");
  bind.add_optional(ver_cmd, "--seed", "seed", spec.seed, "seed (generated and printed when absent)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw UsageError("cannot read config " + config_path);
      json config;
      try {
        config = json::parse(file);
      } catch (const json::exception& e) {
        throw UsageError("config " + config_path + ": " + e.what());
      }
      if (!config.is_object()) throw UsageError("config must be a JSON object");
      bind.apply_config(config, active);
    }
    if (active == map_cmd) return cmd_map(map_action, spec, out);
    if (active == basis_cmd) return cmd_basis(spec, out, err);
    if (active == sim_cmd) return cmd_simulate(spec, out, err);
    if (active == est_cmd) return cmd_estimate(spec, out, err);
    return cmd_verify(spec, out, err);
  } catch (const CheckFailed& e) {
    err << e.what() << "\nwitness: " << e.witness() << '\n';
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace genus::cli
