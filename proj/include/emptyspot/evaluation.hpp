#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emptyspot/clustering.hpp"
#include "emptyspot/cooccurrence.hpp"
#include "emptyspot/error.hpp"
#include "emptyspot/graph.hpp"
#include "emptyspot/interaction.hpp"
#include "emptyspot/predictor.hpp"

namespace emptyspot {

// A failure inside the experiment pipeline, tagged with the stage that raised it.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct PrecisionCurve {
  // values[m - 1] = p(m) for m = 1..|b|.
  std::vector<double> values;
  std::size_t num_modified = 0;

  double at(std::size_t m_ret) const { return values.at(m_ret - 1); }
};

// p(m) = (modified baskets among the top m) / m.
inline PrecisionCurve precision_curve(const RankedBaskets& ranked, const HiddenTruth& truth,
                                      std::size_t total) {
  if (ranked.order.size() != total) {
    throw StructuralError("precision_curve: ranking covers " + std::to_string(ranked.order.size()) +
                          " baskets, expected " + std::to_string(total));
  }
  if (!truth.modified_baskets.empty() && truth.modified_baskets.back() >= total) {
    throw StructuralError("precision_curve: modified basket index " +
                          std::to_string(truth.modified_baskets.back()) + " outside ranking");
  }
  PrecisionCurve c;
  c.num_modified = truth.modified_baskets.size();
  c.values.reserve(total);
  std::vector<char> seen(total, 0);
  std::size_t correct = 0;
  for (std::size_t m = 0; m < total; ++m) {
    const BasketIndex b = ranked.order[m];
    if (b >= total || seen[b]) throw StructuralError("precision_curve: ranking is not a permutation");
    seen[b] = 1;
    if (truth.is_modified(b)) ++correct;
    c.values.push_back(static_cast<double>(correct) / static_cast<double>(m + 1));
  }
  return c;
}

// Mean of p(m) over m = 1..upto.
inline double mean_precision(const PrecisionCurve& c, std::size_t upto) {
  upto = std::min(upto, c.values.size());
  if (upto == 0) return 0.0;
  double s = 0.0;
  for (std::size_t m = 0; m < upto; ++m) s += c.values[m];
  return s / static_cast<double>(upto);
}

// Expected precision of a uniformly random ranking; constant in m.
inline double random_baseline(std::size_t num_modified, std::size_t total) {
  return static_cast<double>(num_modified) / static_cast<double>(total);
}

enum class CenterLabel : char { kA = 'a', kB = 'b', kC = 'c' };

inline NodeId center_node(const TargetNodes& t, CenterLabel label) {
  switch (label) {
    case CenterLabel::kA: return t.a;
    case CenterLabel::kB: return t.b;
    case CenterLabel::kC: return t.c;
  }
  return t.a;
}

struct ExperimentConfig {
  GraphSpec graph;
  // 0 selects the smallest radius reaching coverage_target.
  int radius = 0;
  double coverage_target = kDefaultCoverageTarget;
  std::size_t k_hidden = 10;
  std::size_t num_clusters = 10;
  std::size_t max_iter = 100;
  std::size_t restarts = 5;
  std::vector<CenterLabel> centers{CenterLabel::kA, CenterLabel::kB, CenterLabel::kC};
  std::size_t repetitions = 20;
  // Master seed for clustering initialization.
  std::uint64_t seed = 1;
  // Regenerate the graph (seed graph.seed + r) for every repetition r.
  bool vary_graph = false;
  ScoreVariant score_variant = ScoreVariant::kInverseFrequency;

  void validate() const {
    if (radius < 0) throw ParameterError("radius must be >= 0 (0 = auto)");
    if (!(coverage_target > 0.0 && coverage_target <= 1.0)) {
      throw ParameterError("coverage_target must be in (0, 1]");
    }
    if (k_hidden < 1) throw ParameterError("k_hidden must be >= 1");
    if (num_clusters < 1) throw ParameterError("num_clusters must be >= 1");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
    if (restarts < 1) throw ParameterError("restarts must be >= 1");
    if (repetitions < 1) throw ParameterError("repetitions must be >= 1");
    if (centers.empty()) throw ParameterError("centers must name at least one of a, b, c");
  }
};

// Clustering seed of repetition r.
inline std::uint64_t repetition_seed(std::uint64_t master, std::size_t r) {
  return detail::splitmix64(master ^ detail::splitmix64(0x5eedULL + r));
}

// One repetition of the pipeline, with every intermediate kept for checks.
struct RepetitionResult {
  std::uint64_t clustering_seed = 0;
  GraphSpec graph_spec;
  TargetNodes targets;
  NodeId center = 0;
  int radius = 0;
  Dataset original;
  Dataset observed;
  HiddenTruth truth;
  Clustering clustering;
  RankedBaskets ranking;
  PrecisionCurve curve;
  // Rank correlation between the two score variants on this repetition.
  double variant_spearman = 0.0;
};

struct TrialResult {
  CenterLabel label = CenterLabel::kA;
  std::vector<RepetitionResult> repetitions;
  std::vector<double> mean_curve;
  std::vector<double> min_curve;
  std::vector<double> max_curve;

  const RepetitionResult& first() const { return repetitions.front(); }
  std::size_t num_modified() const { return first().curve.num_modified; }
  std::size_t basket_count() const { return mean_curve.size(); }
  double baseline() const { return random_baseline(num_modified(), basket_count()); }
  double mean_spearman() const {
    double s = 0.0;
    for (const auto& r : repetitions) s += r.variant_spearman;
    return s / static_cast<double>(repetitions.size());
  }
};

namespace detail {

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

// Graph-level state shared by every repetition that uses the same graph.
struct PreparedGraph {
  GraphSpec spec;
  Graph graph;
  TargetNodes targets;
  int radius = 0;
  Dataset original;
};

inline PreparedGraph prepare_graph(const GraphSpec& spec, const ExperimentConfig& config) {
  PreparedGraph p;
  p.spec = spec;
  p.graph = run_stage("generate", [&] { return generate(spec); });
  p.targets = run_stage("select_targets", [&] { return select_targets(p.graph); });
  p.radius = config.radius > 0
                 ? config.radius
                 : run_stage("select_radius", [&] { return select_radius(p.graph, config.coverage_target); });
  p.original = run_stage("simulate_baskets", [&] { return simulate_baskets(p.graph, p.radius); });
  return p;
}

// Observation-side state for one (graph, center) pair.
struct PreparedObservation {
  NodeId center = 0;
  HidingResult hidden;
  FrequencyTable freq;
  ClosenessMatrix closeness;
};

inline PreparedObservation prepare_observation(const PreparedGraph& p, CenterLabel label,
                                               const ExperimentConfig& config) {
  PreparedObservation o;
  o.center = center_node(p.targets, label);
  auto hidden_set = run_stage("build_hidden_set", [&] {
    return build_hidden_set(p.graph, HidingSpec{o.center, config.k_hidden});
  });
  o.hidden = run_stage("hide_nodes", [&] { return hide_nodes(p.original, hidden_set, p.graph); });
  o.freq = run_stage("frequency", [&] { return frequency(o.hidden.observed); });
  o.closeness = run_stage("closeness_matrix", [&] { return closeness_matrix(o.hidden.observed); });
  return o;
}

inline RepetitionResult run_repetition(const PreparedGraph& p, const PreparedObservation& o,
                                       const ExperimentConfig& config, std::uint64_t clustering_seed) {
  RepetitionResult r;
  r.clustering_seed = clustering_seed;
  r.graph_spec = p.spec;
  r.targets = p.targets;
  r.center = o.center;
  r.radius = p.radius;
  r.original = p.original;
  r.observed = o.hidden.observed;
  r.truth = o.hidden.truth;
  r.clustering = run_stage("kmedoid", [&] {
    return kmedoid(o.closeness, config.num_clusters, clustering_seed, config.max_iter, config.restarts);
  });
  r.ranking = run_stage("rank_baskets", [&] {
    return rank_baskets(r.observed, o.freq, r.clustering, config.score_variant);
  });
  r.curve = run_stage("precision_curve", [&] { return precision_curve(r.ranking, r.truth, r.observed.size()); });
  const ScoreVariant other = config.score_variant == ScoreVariant::kInverseFrequency
                                 ? ScoreVariant::kMinFrequencyLiteral
                                 : ScoreVariant::kInverseFrequency;
  const RankedBaskets alt = run_stage("rank_baskets", [&] {
    return rank_baskets(r.observed, o.freq, r.clustering, other);
  });
  r.variant_spearman = spearman_correlation(r.ranking, alt);
  return r;
}

inline void aggregate(TrialResult& t) {
  const std::size_t len = t.repetitions.front().curve.values.size();
  for (const auto& r : t.repetitions) {
    if (r.curve.values.size() != len) throw StructuralError("aggregate: repetitions differ in basket count");
  }
  t.mean_curve.assign(len, 0.0);
  t.min_curve = t.repetitions.front().curve.values;
  t.max_curve = t.min_curve;
  for (const auto& r : t.repetitions) {
    for (std::size_t m = 0; m < len; ++m) {
      t.mean_curve[m] += r.curve.values[m];
      t.min_curve[m] = std::min(t.min_curve[m], r.curve.values[m]);
      t.max_curve[m] = std::max(t.max_curve[m], r.curve.values[m]);
    }
  }
  for (double& v : t.mean_curve) v /= static_cast<double>(t.repetitions.size());
  // Keep the mean inside the band despite rounding.
  for (std::size_t m = 0; m < len; ++m) {
    t.mean_curve[m] = std::clamp(t.mean_curve[m], t.min_curve[m], t.max_curve[m]);
  }
}

}  // namespace detail

// All repetitions of one trial case on graph `g`. With vary_graph set, each
// repetition generates its own graph and `g` only serves repetition 0's
// spec check.
inline TrialResult run_trial(const Graph& g, const ExperimentConfig& config, CenterLabel label) {
  config.validate();
  TrialResult t;
  t.label = label;
  if (!config.vary_graph) {
    detail::PreparedGraph p;
    p.spec = config.graph;
    p.graph = g;
    p.targets = detail::run_stage("select_targets", [&] { return select_targets(g); });
    p.radius = config.radius > 0 ? config.radius : detail::run_stage("select_radius", [&] {
      return select_radius(g, config.coverage_target);
    });
    p.original = detail::run_stage("simulate_baskets", [&] { return simulate_baskets(g, p.radius); });
    const auto o = detail::prepare_observation(p, label, config);
    for (std::size_t r = 0; r < config.repetitions; ++r) {
      t.repetitions.push_back(detail::run_repetition(p, o, config, repetition_seed(config.seed, r)));
    }
  } else {
    for (std::size_t r = 0; r < config.repetitions; ++r) {
      GraphSpec spec = config.graph;
      spec.seed = config.graph.seed + r;
      const auto p = detail::prepare_graph(spec, config);
      const auto o = detail::prepare_observation(p, label, config);
      t.repetitions.push_back(detail::run_repetition(p, o, config, repetition_seed(config.seed, r)));
    }
  }
  detail::aggregate(t);
  return t;
}

struct ExperimentResult {
  ExperimentConfig config;
  Graph graph;
  TargetNodes targets;
  int radius = 0;
  std::vector<TrialResult> trials;

  const TrialResult& trial(CenterLabel label) const {
    for (const auto& t : trials) {
      if (t.label == label) return t;
    }
    throw ParameterError(std::string("no trial for center ") + static_cast<char>(label));
  }
};

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult res;
  res.config = config;
  res.graph = detail::run_stage("generate", [&] { return generate(config.graph); });
  res.targets = detail::run_stage("select_targets", [&] { return select_targets(res.graph); });
  res.radius = config.radius > 0 ? config.radius : detail::run_stage("select_radius", [&] {
    return select_radius(res.graph, config.coverage_target);
  });
  ExperimentConfig resolved = config;
  resolved.radius = res.radius;
  for (CenterLabel label : config.centers) res.trials.push_back(run_trial(res.graph, resolved, label));
  res.config = resolved;
  return res;
}

}  // namespace emptyspot
