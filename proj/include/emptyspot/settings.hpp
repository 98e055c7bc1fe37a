#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "emptyspot/error.hpp"
#include "emptyspot/evaluation.hpp"
#include "emptyspot/io.hpp"

namespace emptyspot {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Flat key/value run configuration. Every value remembers where it came
// from; later layers (config file, then flags) override earlier ones.
class Settings {
 public:
  struct Entry {
    std::string value;
    std::string source;
    std::string help;
  };

  static Settings defaults() {
    Settings s;
    s.define("model", "homogeneous", "graph generator: ba | homogeneous | ws");
    s.define("n", "995", "node count");
    s.define("m", "2", "ba: links per new node");
    s.define("d_min", "3", "homogeneous: minimum degree");
    s.define("d_max", "8", "homogeneous: maximum degree");
    s.define("lambda", format_double(kDefaultHomogeneousLambda), "homogeneous: degree-law decay rate");
    s.define("locality", "0", "homogeneous: spatial stub-matching length scale (0 = none)");
    s.define("ring_degree", "4", "ws: even ring-lattice degree");
    s.define("beta", "0.1", "ws: rewiring probability");
    s.define("graph_seed", "auto", "graph generator seed (auto = seed)");
    s.define("radius", "auto", "basket radius in hops (auto = smallest reaching coverage_target)");
    s.define("coverage_target", "0.15", "coverage fraction used by radius = auto");
    s.define("k_hidden", "10", "hidden-set size");
    s.define("clusters", "10", "number of k-medoid clusters");
    s.define("max_iter", "100", "k-medoid iteration cap");
    s.define("restarts", "5", "k-medoid restarts (best objective kept)");
    s.define("centers", "a,b,c", "trial-case centers");
    s.define("repetitions", "20", "repetition seeds per trial case");
    s.define("seed", "1", "master seed");
    s.define("vary_graph", "false", "regenerate the graph for every repetition");
    s.define("score_variant", "eq10", "predictor variant: eq10 | eq11-literal");
    return s;
  }

  static std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  bool contains(std::string_view key) const { return entries_.find(std::string(key)) != entries_.end(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  void set(const std::string& key, std::string value, std::string source) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ParameterError("unknown setting '" + key + "'");
    it->second.value = std::move(value);
    it->second.source = std::move(source);
  }

  const std::string& raw(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ParameterError("unknown setting '" + key + "'");
    return it->second.value;
  }

  template <typename T>
  T get(const std::string& key) const {
    const std::string& v = raw(key);
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v == "true" || v == "1") return true;
      if (v == "false" || v == "0") return false;
      throw ParameterError("setting '" + key + "' expects true/false, got '" + v + "'");
    } else {
      T out{};
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
      if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw ParameterError("setting '" + key + "' has invalid value '" + v + "'");
      }
      return out;
    }
  }

  // `key = value` lines; '#' starts a comment.
  void load_config(std::istream& is, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string_view s = line;
      if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = io::detail::trim(s);
      if (s.empty()) continue;
      const std::size_t eq = s.find('=');
      if (eq == std::string_view::npos) throw ParseError(source, lineno, "expected 'key = value'");
      const std::string key(io::detail::trim(s.substr(0, eq)));
      if (!contains(key)) throw ParseError(source, lineno, "unknown setting '" + key + "'");
      set(key, std::string(io::detail::trim(s.substr(eq + 1))), "file");
    }
  }

  void load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open config file");
    load_config(in, path.string());
  }

  std::uint64_t master_seed() const { return get<std::uint64_t>("seed"); }

  GraphSpec graph_spec() const {
    GraphSpec g;
    g.model = parse_graph_model(raw("model"));
    g.n = get<std::size_t>("n");
    g.m_links = get<std::size_t>("m");
    g.d_min = get<int>("d_min");
    g.d_max = get<int>("d_max");
    g.lambda = get<double>("lambda");
    g.locality = get<double>("locality");
    g.ring_degree = get<std::size_t>("ring_degree");
    g.rewire_prob = get<double>("beta");
    g.seed = raw("graph_seed") == "auto" ? master_seed() : get<std::uint64_t>("graph_seed");
    return g;
  }

  ExperimentConfig experiment_config() const {
    ExperimentConfig c;
    c.graph = graph_spec();
    c.radius = raw("radius") == "auto" ? 0 : get<int>("radius");
    if (raw("radius") != "auto" && c.radius < 1) throw ParameterError("radius must be >= 1 or auto");
    c.coverage_target = get<double>("coverage_target");
    c.k_hidden = get<std::size_t>("k_hidden");
    c.num_clusters = get<std::size_t>("clusters");
    c.max_iter = get<std::size_t>("max_iter");
    c.restarts = get<std::size_t>("restarts");
    c.centers = parse_centers(raw("centers"));
    c.repetitions = get<std::size_t>("repetitions");
    c.seed = master_seed();
    c.vary_graph = get<bool>("vary_graph");
    c.score_variant = parse_score_variant(raw("score_variant"));
    c.validate();
    return c;
  }

  static std::vector<CenterLabel> parse_centers(std::string_view s) {
    std::vector<CenterLabel> out;
    for (char ch : s) {
      if (ch == ',' || ch == ' ') continue;
      if (ch != 'a' && ch != 'b' && ch != 'c') {
        throw ParameterError("centers: unknown label '" + std::string(1, ch) + "' (expected a, b, c)");
      }
      const auto label = static_cast<CenterLabel>(ch);
      if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
    }
    if (out.empty()) throw ParameterError("centers: empty list");
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, e] : entries_) j[key] = {{"value", e.value}, {"source", e.source}};
    return j;
  }

  // Restores values and their recorded sources.
  void load_json(const nlohmann::json& j, const std::string& source) {
    if (!j.is_object()) throw ParseError(source, 0, "manifest config must be an object");
    for (const auto& [key, e] : j.items()) {
      if (!contains(key)) throw ParseError(source, 0, "unknown setting '" + key + "' in manifest");
      if (!e.contains("value") || !e["value"].is_string()) {
        throw ParseError(source, 0, "setting '" + key + "' lacks a string value");
      }
      set(key, e["value"].get<std::string>(), e.value("source", std::string("manifest")));
    }
  }

 private:
  void define(const std::string& key, std::string value, std::string help) {
    entries_[key] = Entry{std::move(value), "default", std::move(help)};
  }

  std::map<std::string, Entry> entries_;
};

// Reproducibility record of one `experiment` run: the resolved settings
// with their sources, the artifacts written, and per-trial summaries.
struct RunManifest {
  Settings settings;
  std::vector<std::string> artifacts;

  nlohmann::ordered_json to_json(const ExperimentResult& result) const {
    nlohmann::ordered_json j;
    j["tool"] = "emptyspot";
    j["version"] = std::string(kToolVersion);
    j["master_seed"] = settings.master_seed();
    j["config"] = settings.to_json();
    j["resolved"] = {{"graph_seed", result.config.graph.seed},
                     {"radius", result.radius},
                     {"nodes", result.graph.node_count()},
                     {"edges", result.graph.edge_count()},
                     {"baskets", result.graph.node_count()}};
    j["targets"] = {{"a", result.targets.a}, {"b", result.targets.b}, {"c", result.targets.c}};
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (const auto& t : result.trials) {
      const std::size_t k = t.num_modified();
      nlohmann::ordered_json per_rep = nlohmann::ordered_json::array();
      for (const auto& r : t.repetitions) per_rep.push_back(r.variant_spearman);
      nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
      for (const auto& r : t.repetitions) seeds.push_back(r.clustering_seed);
      trials.push_back({
          {"center_label", std::string(1, static_cast<char>(t.label))},
          {"center_node", t.first().center},
          {"hidden_nodes", t.first().truth.hidden_nodes},
          {"num_modified", k},
          {"baseline", t.baseline()},
          {"mean_precision_head", mean_precision(PrecisionCurve{t.mean_curve, k}, k)},
          {"clustering_seeds", seeds},
          {"spearman_eq10_vs_eq11_mean", t.mean_spearman()},
          {"spearman_eq10_vs_eq11", per_rep},
      });
    }
    j["trials"] = trials;
    j["artifacts"] = artifacts;
    return j;
  }
};

// Settings recorded in a manifest written by `experiment`.
inline Settings load_manifest_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open manifest");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  if (!j.contains("config")) throw ParseError(path.string(), 0, "manifest has no 'config' section");
  Settings s = Settings::defaults();
  s.load_json(j["config"], path.string());
  return s;
}

}  // namespace emptyspot
