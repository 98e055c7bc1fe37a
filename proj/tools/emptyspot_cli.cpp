// emptyspot: command-line front end for the hidden-node prediction pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 pipeline error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emptyspot/emptyspot.hpp"

namespace fs = std::filesystem;
using namespace emptyspot;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kPipeline = 3 };

// Options shared by every subcommand: --seed, --config, --out and one flag
// per setting key.
struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat 'key = value' config file");
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    const Settings defaults = Settings::defaults();
    for (const auto& [key, entry] : defaults.entries()) {
      std::string names = "--" + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key) names += ",--" + dashed;
      flag_options[key] = cmd->add_option(names, flag_values[key], entry.help);
    }
  }

  Settings resolve(const std::optional<Settings>& base = std::nullopt) const {
    Settings s = base ? *base : Settings::defaults();
    if (!config_path.empty()) s.load_config_file(config_path);
    for (const auto& [key, opt] : flag_options) {
      if (opt->count() > 0) s.set(key, flag_values.at(key), "flag");
    }
    return s;
  }

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

Graph read_graph(const std::string& path) { return io::load_file(path, [](auto& in, auto src) { return io::load_graph(in, src); }); }
Dataset read_dataset(const std::string& path) { return io::load_file(path, [](auto& in, auto src) { return io::load_dataset(in, src); }); }

int resolve_radius(const Settings& s, const Graph& g) {
  if (s.raw("radius") == "auto") return select_radius(g, s.get<double>("coverage_target"));
  const int r = s.get<int>("radius");
  if (r < 1) throw ParameterError("radius must be >= 1 or auto");
  return r;
}

void report(const std::string& line) { std::cout << line << '\n'; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_generate(const CommonOptions& o) {
  const Settings s = o.resolve();
  const GraphSpec spec = s.graph_spec();
  const Graph g = generate(spec);
  io::save_file(o.out("graph.txt"), [&](auto& os) { io::save_graph(os, g); });
  const auto d = degree_summary(g);
  report("graph.txt: nodes=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) +
         " mean_degree=" + fmt("%.4f", d.mean) + " cv=" + fmt("%.4f", d.cv) + " gini=" + fmt("%.4f", d.gini));
  return kOk;
}

int cmd_simulate(const CommonOptions& o, const std::string& graph_path) {
  const Settings s = o.resolve();
  const Graph g = read_graph(graph_path);
  const int radius = resolve_radius(s, g);
  const Dataset d = simulate_baskets(g, radius);
  io::save_file(o.out("dataset.txt"), [&](auto& os) { io::save_dataset(os, d); });
  report("dataset.txt: baskets=" + std::to_string(d.size()) + " radius=" + std::to_string(radius) +
         " coverage=" + fmt("%.4f", coverage_fraction(g, radius)));
  return kOk;
}

int cmd_hide(const CommonOptions& o, const std::string& graph_path, const std::string& dataset_path,
             std::optional<NodeId> center, const std::string& target) {
  const Settings s = o.resolve();
  const Graph g = read_graph(graph_path);
  const Dataset original = read_dataset(dataset_path);
  if (original.node_universe != g.node_count()) {
    throw StructuralError("dataset node universe does not match the graph");
  }
  NodeId c;
  if (center) {
    c = *center;
  } else {
    if (target.size() != 1 || target.find_first_of("abc") != 0) {
      throw ParameterError("--target must be a, b or c");
    }
    c = center_node(select_targets(g), static_cast<CenterLabel>(target[0]));
  }
  const auto hidden = build_hidden_set(g, HidingSpec{c, s.get<std::size_t>("k_hidden")});
  const auto result = hide_nodes(original, hidden, g);
  io::save_file(o.out("observed.txt"), [&](auto& os) { io::save_dataset(os, result.observed); });
  io::save_file(o.out("truth.txt"), [&](auto& os) { io::save_truth(os, result.truth); });
  report("observed.txt truth.txt: center=" + std::to_string(c) + " hidden=" +
         std::to_string(result.truth.hidden_nodes.size()) + " modified=" +
         std::to_string(result.truth.modified_baskets.size()) + " gateways=" +
         std::to_string(result.truth.gateway_nodes.size()));
  return kOk;
}

int cmd_cluster(const CommonOptions& o, const std::string& dataset_path, bool dump_matrix) {
  const Settings s = o.resolve();
  const Dataset d = read_dataset(dataset_path);
  const ClosenessMatrix m = closeness_matrix(d);
  const Clustering cl = kmedoid(m, s.get<std::size_t>("clusters"), s.master_seed(),
                                s.get<std::size_t>("max_iter"), s.get<std::size_t>("restarts"));
  io::save_file(o.out("clustering.txt"), [&](auto& os) { io::save_clustering(os, cl); });
  if (dump_matrix) io::save_file(o.out("closeness.csv"), [&](auto& os) { io::save_closeness_csv(os, m); });
  report("clustering.txt: clusters=" + std::to_string(cl.num_clusters) + " nodes=" +
         std::to_string(m.dimension()) + " iterations=" + std::to_string(cl.iterations_run) +
         " objective=" + fmt("%.6g", objective(cl, m)) + " orphans=" + std::to_string(cl.orphan_count));
  return kOk;
}

int cmd_rank(const CommonOptions& o, const std::string& dataset_path, const std::string& clustering_path) {
  const Settings s = o.resolve();
  const Dataset d = read_dataset(dataset_path);
  const Clustering cl = io::load_file(clustering_path, [](auto& in, auto src) { return io::load_clustering(in, src); });
  const auto ranked = rank_baskets(d, frequency(d), cl, parse_score_variant(s.raw("score_variant")));
  io::save_file(o.out("ranking.csv"), [&](auto& os) { io::save_ranking(os, ranked); });
  report("ranking.csv: baskets=" + std::to_string(ranked.order.size()) + " top_score=" +
         io::format_score(ranked.order.empty() ? 0.0 : ranked.score_at_rank(0)));
  return kOk;
}

int cmd_evaluate(const CommonOptions& o, const std::string& ranking_path, const std::string& truth_path) {
  (void)o.resolve();
  const auto ranked = io::load_file(ranking_path, [](auto& in, auto src) { return io::load_ranking(in, src); });
  const auto truth = io::load_file(truth_path, [](auto& in, auto src) { return io::load_truth(in, src); });
  const auto curve = precision_curve(ranked, truth, ranked.order.size());
  io::save_file(o.out("precision.csv"), [&](auto& os) { io::save_precision(os, io::PrecisionTable::from_curve(curve)); });
  report("precision.csv: modified=" + std::to_string(curve.num_modified) + " baseline=" +
         fmt("%.4f", random_baseline(curve.num_modified, ranked.order.size())) + " mean_p_head=" +
         fmt("%.4f", mean_precision(curve, curve.num_modified)));
  return kOk;
}

int cmd_experiment(const CommonOptions& o, const std::string& manifest_path) {
  std::optional<Settings> base;
  if (!manifest_path.empty()) base = load_manifest_settings(manifest_path);
  RunManifest manifest{o.resolve(base), {}};
  const ExperimentConfig config = manifest.settings.experiment_config();
  const ExperimentResult result = run_experiment(config);

  auto write = [&](const std::string& name, auto&& saver) {
    io::save_file(o.out(name), saver);
    manifest.artifacts.push_back(name);
  };
  write("graph.txt", [&](auto& os) { io::save_graph(os, result.graph); });
  write("dataset.txt", [&](auto& os) { io::save_dataset(os, result.trials.front().first().original); });
  for (const auto& t : result.trials) {
    const std::string label(1, static_cast<char>(t.label));
    const auto& rep = t.first();
    write("observed_" + label + ".txt", [&](auto& os) { io::save_dataset(os, rep.observed); });
    write("truth_" + label + ".txt", [&](auto& os) { io::save_truth(os, rep.truth); });
    write("clustering_" + label + ".txt", [&](auto& os) { io::save_clustering(os, rep.clustering); });
    write("ranking_" + label + ".csv", [&](auto& os) { io::save_ranking(os, rep.ranking); });
    write("precision_" + label + ".csv", [&](auto& os) { io::save_precision(os, io::PrecisionTable::from_trial(t)); });
  }
  manifest.artifacts.push_back("manifest.json");
  io::save_file(o.out("manifest.json"), [&](auto& os) { os << manifest.to_json(result).dump(2) << '\n'; });

  report("targets: a=" + std::to_string(result.targets.a) + " b=" + std::to_string(result.targets.b) +
         " c=" + std::to_string(result.targets.c) + " radius=" + std::to_string(result.radius));
  for (const auto& t : result.trials) {
    const std::size_t k = t.num_modified();
    report(std::string("case [") + static_cast<char>(t.label) + "]: modified=" + std::to_string(k) +
           " baseline=" + fmt("%.4f", t.baseline()) + " mean_p_head=" +
           fmt("%.4f", mean_precision(PrecisionCurve{t.mean_curve, k}, k)) + " spearman_eq10_eq11=" +
           fmt("%.4f", t.mean_spearman()));
  }
  return kOk;
}

int cmd_plot(const CommonOptions& o, const std::vector<std::string>& graphs,
             const std::vector<std::string>& precisions) {
  (void)o.resolve();
  if (graphs.empty() && precisions.empty()) throw ParameterError("plot: give --graph and/or --precision inputs");
  if (!graphs.empty()) {
    plot::Figure fig{"Degree distribution", "d / mu(d)", "P(d)", true, true, {}};
    std::string csv;
    for (const auto& path : graphs) {
      const Graph g = read_graph(path);
      const auto s = degree_summary(g);
      fig.series.push_back(plot::degree_distribution_series(s, g.node_count(), fs::path(path).filename().string()));
      csv += "# " + fs::path(path).filename().string() + "\n" +
             io::to_text([&](auto& os) { plot::save_degree_csv(os, s, g.node_count()); });
    }
    io::save_file(o.out("degree_distribution.csv"), [&](auto& os) { os << csv; });
    io::save_file(o.out("degree_distribution.svg"), [&](auto& os) { plot::render_svg(os, fig); });
    report("degree_distribution.csv degree_distribution.svg");
  }
  if (!precisions.empty()) {
    plot::Figure fig{"Precision", "m_ret", "p", false, false, {}};
    std::vector<io::PrecisionTable> tables;
    for (const auto& path : precisions) {
      tables.push_back(io::load_file(path, [](auto& in, auto src) { return io::load_precision(in, src); }));
      plot::Series s{fs::path(path).stem().string(), {}, tables.back().mean, true};
      for (std::size_t m = 1; m <= s.y.size(); ++m) s.x.push_back(static_cast<double>(m));
      fig.series.push_back(std::move(s));
    }
    io::save_file(o.out("precision_plot.csv"), [&](auto& os) {
      os << "m_ret";
      for (const auto& s : fig.series) os << ',' << s.label;
      os << '\n';
      std::size_t rows = 0;
      for (const auto& t : tables) rows = std::max(rows, t.mean.size());
      for (std::size_t m = 0; m < rows; ++m) {
        os << m + 1;
        for (const auto& t : tables) os << ',' << (m < t.mean.size() ? io::format_score(t.mean[m]) : "");
        os << '\n';
      }
    });
    io::save_file(o.out("precision.svg"), [&](auto& os) { plot::render_svg(os, fig); });
    report("precision_plot.csv precision.svg");
  }
  return kOk;
}

void fail(const std::string& what) { std::cerr << "emptyspot: error: " << what << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden-node (empty spot) prediction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::map<std::string, CommonOptions> common;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    common[name].attach(cmd);
    return cmd;
  };

  std::string graph_path, dataset_path, clustering_path, ranking_path, truth_path, manifest_path, target;
  std::optional<NodeId> center;
  bool dump_matrix = false;
  std::vector<std::string> plot_graphs, plot_precisions;

  sub("generate", "generate a graph file");
  auto* simulate = sub("simulate", "simulate baskets over a graph");
  simulate->add_option("--graph", graph_path, "graph file")->required();
  auto* hide = sub("hide", "hide a node set; writes observed dataset and truth");
  hide->add_option("--graph", graph_path, "graph file")->required();
  hide->add_option("--dataset", dataset_path, "original dataset file")->required();
  auto* center_opt = hide->add_option("--center", center, "center node id");
  hide->add_option("--target", target, "center by trial case: a | b | c")->excludes(center_opt);
  auto* cluster = sub("cluster", "k-medoid clustering of an observed dataset");
  cluster->add_option("--dataset", dataset_path, "observed dataset file")->required();
  cluster->add_flag("--matrix-csv", dump_matrix, "also write the closeness matrix as closeness.csv");
  auto* rank = sub("rank", "rank baskets with the predictor function");
  rank->add_option("--dataset", dataset_path, "observed dataset file")->required();
  rank->add_option("--clustering", clustering_path, "clustering dump")->required();
  auto* evaluate = sub("evaluate", "precision curve of a ranking");
  evaluate->add_option("--ranking", ranking_path, "ranking CSV")->required();
  evaluate->add_option("--truth", truth_path, "truth file")->required();
  auto* experiment = sub("experiment", "full three-case experiment");
  experiment->add_option("--manifest", manifest_path, "replay the settings recorded in a manifest");
  auto* plot_cmd = sub("plot", "degree-distribution and precision plot data");
  plot_cmd->add_option("--graph", plot_graphs, "graph file(s)");
  plot_cmd->add_option("--precision", plot_precisions, "precision CSV(s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail(e.what());
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CommonOptions& o = common.at(name);
  try {
    if (name == "generate") return cmd_generate(o);
    if (name == "simulate") return cmd_simulate(o, graph_path);
    if (name == "hide") {
      if (!center && target.empty()) throw ParameterError("hide: give --center or --target");
      return cmd_hide(o, graph_path, dataset_path, center, target);
    }
    if (name == "cluster") return cmd_cluster(o, dataset_path, dump_matrix);
    if (name == "rank") return cmd_rank(o, dataset_path, clustering_path);
    if (name == "evaluate") return cmd_evaluate(o, ranking_path, truth_path);
    if (name == "experiment") return cmd_experiment(o, manifest_path);
    if (name == "plot") return cmd_plot(o, plot_graphs, plot_precisions);
  } catch (const ParameterError& e) {
    fail(e.what());
    return kUsage;
  } catch (const ParseError& e) {
    fail(e.what());
    return kInput;
  } catch (const std::exception& e) {
    fail(e.what());
    return kPipeline;
  }
  return kUsage;
}
