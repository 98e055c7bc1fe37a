#include <gtest/gtest.h>

#include <cmath>

#include "emptyspot/evaluation.hpp"

namespace emptyspot {
namespace {

RankedBaskets identity_ranking(std::size_t n) {
  RankedBaskets r;
  for (BasketIndex i = 0; i < n; ++i) r.order.push_back(i);
  r.scores.assign(n, 0.0);
  return r;
}

HiddenTruth modified(std::vector<BasketIndex> idx) {
  HiddenTruth t;
  t.modified_baskets = std::move(idx);
  return t;
}

TEST(PrecisionCurveTest, HandExample) {
  const auto c = precision_curve(identity_ranking(4), modified({0, 2}), 4);
  EXPECT_EQ(c.values, (std::vector<double>{1.0, 0.5, 2.0 / 3.0, 0.5}));
  EXPECT_EQ(c.num_modified, 2u);
  EXPECT_DOUBLE_EQ(c.at(3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(random_baseline(c.num_modified, 4), 0.5);
}

TEST(PrecisionCurveTest, AllAndNoneModified) {
  const auto all = precision_curve(identity_ranking(5), modified({0, 1, 2, 3, 4}), 5);
  for (double p : all.values) EXPECT_EQ(p, 1.0);
  const auto none = precision_curve(identity_ranking(5), modified({}), 5);
  for (double p : none.values) EXPECT_EQ(p, 0.0);
}

TEST(PrecisionCurveTest, RejectsMismatches) {
  EXPECT_THROW(precision_curve(identity_ranking(3), modified({0}), 4), StructuralError);
  EXPECT_THROW(precision_curve(identity_ranking(3), modified({5}), 3), StructuralError);
  RankedBaskets dup{{0, 0, 1}, {0, 0, 0}};
  EXPECT_THROW(precision_curve(dup, modified({1}), 3), StructuralError);
}

TEST(PrecisionCurveTest, CountsAreIntegral) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    RankedBaskets r = identity_ranking(n);
    rng.shuffle(r.order);
    std::vector<BasketIndex> mod;
    for (BasketIndex i = 0; i < n; ++i) {
      if (rng.bernoulli(0.3)) mod.push_back(i);
    }
    const auto c = precision_curve(r, modified(mod), n);
    EXPECT_TRUE(c.at(1) == 0.0 || c.at(1) == 1.0);
    for (std::size_t m = 1; m <= n; ++m) {
      const double hits = c.at(m) * static_cast<double>(m);
      EXPECT_NEAR(hits, std::round(hits), 1e-9);
    }
    EXPECT_NEAR(c.at(n), random_baseline(mod.size(), n), 1e-12);
  }
}

TEST(MeanPrecisionTest, Examples) {
  PrecisionCurve c{{1.0, 0.5, 0.0}, 1};
  EXPECT_DOUBLE_EQ(mean_precision(c, 2), 0.75);
  EXPECT_DOUBLE_EQ(mean_precision(c, 10), 0.5);
  EXPECT_DOUBLE_EQ(mean_precision(c, 0), 0.0);
  EXPECT_DOUBLE_EQ(random_baseline(200, 995), 200.0 / 995.0);
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.graph.model = GraphModel::kHomogeneous;
  cfg.graph.n = 150;
  cfg.graph.locality = 0.08;
  cfg.graph.seed = 3;
  cfg.k_hidden = 6;
  cfg.num_clusters = 4;
  cfg.restarts = 2;
  cfg.repetitions = 3;
  return cfg;
}

TEST(RunTrialTest, DeterministicWithPipelineInvariants) {
  const ExperimentConfig cfg = small_config();
  const Graph g = generate(cfg.graph);
  ExperimentConfig resolved = cfg;
  resolved.radius = 2;
  const auto a = run_trial(g, resolved, CenterLabel::kB);
  const auto b = run_trial(g, resolved, CenterLabel::kB);
  ASSERT_EQ(a.repetitions.size(), 3u);
  EXPECT_EQ(a.mean_curve, b.mean_curve);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& rep = a.repetitions[r];
    EXPECT_EQ(rep.clustering_seed, repetition_seed(cfg.seed, r));
    EXPECT_EQ(rep.center, select_targets(g).b);
    EXPECT_EQ(rep.truth.hidden_nodes.size(), 6u);
    EXPECT_EQ(rep.curve.values.size(), g.node_count());
    EXPECT_EQ(rep.clustering.assignment, b.repetitions[r].clustering.assignment);
  }
  for (std::size_t m = 0; m < a.mean_curve.size(); ++m) {
    EXPECT_LE(a.min_curve[m], a.mean_curve[m]);
    EXPECT_LE(a.mean_curve[m], a.max_curve[m]);
  }
  EXPECT_DOUBLE_EQ(a.baseline(), random_baseline(a.num_modified(), g.node_count()));
}

TEST(RunTrialTest, SingleRepetitionMeanIsTheCurve) {
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 1;
  const auto t = run_trial(generate(cfg.graph), cfg, CenterLabel::kA);
  EXPECT_EQ(t.mean_curve, t.first().curve.values);
  EXPECT_EQ(t.min_curve, t.max_curve);
}

TEST(RunTrialTest, VaryGraphUsesConsecutiveSeeds) {
  ExperimentConfig cfg = small_config();
  cfg.vary_graph = true;
  cfg.radius = 2;
  const auto t = run_trial(generate(cfg.graph), cfg, CenterLabel::kC);
  for (std::size_t r = 0; r < t.repetitions.size(); ++r) {
    EXPECT_EQ(t.repetitions[r].graph_spec.seed, cfg.graph.seed + r);
  }
}

TEST(RunExperimentTest, SingleCenterResolvesRadius) {
  ExperimentConfig cfg = small_config();
  cfg.centers = {CenterLabel::kC};
  const auto res = run_experiment(cfg);
  ASSERT_EQ(res.trials.size(), 1u);
  EXPECT_GT(res.radius, 0);
  EXPECT_EQ(res.config.radius, res.radius);
  EXPECT_EQ(res.radius, select_radius(res.graph, cfg.coverage_target));
  EXPECT_EQ(res.trial(CenterLabel::kC).first().center, res.targets.c);
  EXPECT_THROW(res.trial(CenterLabel::kA), ParameterError);
}

TEST(RunExperimentTest, ErrorsNameTheStage) {
  ExperimentConfig cfg = small_config();
  cfg.graph.d_min = 9;  // above d_max
  try {
    run_experiment(cfg);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "generate");
  }

  ExperimentConfig too_many = small_config();
  too_many.num_clusters = 10000;
  try {
    run_experiment(too_many);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "kmedoid");
  }
}

TEST(ExperimentConfigTest, Validation) {
  ExperimentConfig cfg;
  cfg.repetitions = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = ExperimentConfig{};
  cfg.centers.clear();
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = ExperimentConfig{};
  cfg.coverage_target = 1.5;
  EXPECT_THROW(run_experiment(cfg), ParameterError);
}

TEST(RepetitionSeedTest, DistinctPerRepetition) {
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(1, 1));
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(2, 0));
  EXPECT_EQ(repetition_seed(7, 3), repetition_seed(7, 3));
}

}  // namespace
}  // namespace emptyspot
