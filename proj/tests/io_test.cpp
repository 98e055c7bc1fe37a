#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "emptyspot/io.hpp"
#include "emptyspot/plot.hpp"
#include "emptyspot/settings.hpp"
#include "random_instances.hpp"
#include "test_graphs.hpp"

namespace emptyspot {
namespace {

template <typename Loader>
auto parse(const std::string& text, Loader&& loader) {
  std::istringstream is(text);
  return loader(is, "t");
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected ParseError";
  return 0;
}

TEST(GraphCodecTest, RoundTripRandomGraphs) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = generate_ba(20 + rng.below(100), 1 + rng.below(3), rng.next());
    const std::string text = io::to_text([&](std::ostream& os) { io::save_graph(os, g); });
    const Graph back = parse(text, [](std::istream& is, const std::string& s) { return io::load_graph(is, s); });
    EXPECT_EQ(back, g);
    EXPECT_EQ(io::to_text([&](std::ostream& os) { io::save_graph(os, back); }), text);
  }
}

TEST(GraphCodecTest, UnsortedEdgesAreCanonicalized) {
  const Graph g = parse("#nodes 3\n2\t1\n\n1 0\n", [](std::istream& is, const std::string& s) {
    return io::load_graph(is, s);
  });
  EXPECT_EQ(g, testing::path3());
  EXPECT_EQ(io::to_text([&](std::ostream& os) { io::save_graph(os, g); }), "#nodes 3\n0\t1\n1\t2\n");
}

TEST(GraphCodecTest, MalformedLinesReportLineNumbers) {
  auto load = [](const std::string& text) {
    return [text] { parse(text, [](std::istream& is, const std::string& s) { return io::load_graph(is, s); }); };
  };
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0\t1\n1\tx\n")), 3u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0\t3\n")), 2u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n1\t1\n")), 2u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0\t1\n1\t0\n")), 3u);
  EXPECT_EQ(parse_error_line(load("0\t1\n")), 1u);
}

TEST(DatasetCodecTest, RoundTripKeepsEmptyBaskets) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset d = testing::random_dataset(rng, 12, 10);
    d.baskets.push_back({d.size(), {}});
    const std::string text = io::to_text([&](std::ostream& os) { io::save_dataset(os, d); });
    EXPECT_EQ(parse(text, [](std::istream& is, const std::string& s) { return io::load_dataset(is, s); }), d);
  }
}

TEST(DatasetCodecTest, RejectsMalformedInput) {
  auto load = [](const std::string& text) {
    return [text] { parse(text, [](std::istream& is, const std::string& s) { return io::load_dataset(is, s); }); };
  };
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0:0,1\n2:1\n")), 3u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0:1,0\n")), 2u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0:0,3\n")), 2u);
  EXPECT_EQ(parse_error_line(load("#nodes 3\n0 0 1\n")), 2u);
  EXPECT_THROW(load("#nodes 3\n")(), ParseError);
}

TEST(TruthCodecTest, RoundTrip) {
  const Graph g = generate_homogeneous(80, 3, 6, 0.7, 2, 0.1);
  const auto r = hide_nodes(simulate_baskets(g, 2), build_hidden_set(g, {5, 7}), g);
  const std::string text = io::to_text([&](std::ostream& os) { io::save_truth(os, r.truth); });
  EXPECT_EQ(parse(text, [](std::istream& is, const std::string& s) { return io::load_truth(is, s); }), r.truth);

  HiddenTruth empty;
  const std::string blank = io::to_text([&](std::ostream& os) { io::save_truth(os, empty); });
  EXPECT_EQ(blank, "hidden=\nmodified=\ngateways=\n");
  EXPECT_EQ(parse(blank, [](std::istream& is, const std::string& s) { return io::load_truth(is, s); }), empty);
  EXPECT_THROW(parse("hidden=1\ngateways=\n", [](std::istream& is, const std::string& s) {
                 return io::load_truth(is, s);
               }),
               ParseError);
}

TEST(ClusteringCodecTest, RoundTripAndValidation) {
  Rng rng(3);
  const Dataset d = testing::random_covering_dataset(rng, 25, 15);
  const auto m = closeness_matrix(d);
  const auto cl = kmedoid(m, 4, 9, 100);
  const std::string text = io::to_text([&](std::ostream& os) { io::save_clustering(os, cl); });
  const auto back = parse(text, [](std::istream& is, const std::string& s) { return io::load_clustering(is, s); });
  EXPECT_EQ(back.medoids, cl.medoids);
  EXPECT_EQ(back.node_ids, cl.node_ids);
  EXPECT_EQ(back.assignment, cl.assignment);
  EXPECT_DOUBLE_EQ(objective(back, m), objective(cl, m));

  auto load = [](const std::string& t) {
    return [t] { parse(t, [](std::istream& is, const std::string& s) { return io::load_clustering(is, s); }); };
  };
  EXPECT_EQ(parse_error_line(load("0:1|0,1\n1:5|2,3\n")), 2u);
  EXPECT_EQ(parse_error_line(load("0:1|0,1\n1:2|1,2\n")), 2u);
  EXPECT_THROW(load("")(), ParseError);
}

TEST(RankingCodecTest, RoundTrip) {
  RankedBaskets r{{2, 0, 1}, {0.25, 0.125, 1.0 / 3.0}};
  const std::string text = io::to_text([&](std::ostream& os) { io::save_ranking(os, r); });
  EXPECT_EQ(text.substr(0, text.find('\n')), "rank,basket_index,score");
  const auto back = parse(text, [](std::istream& is, const std::string& s) { return io::load_ranking(is, s); });
  EXPECT_EQ(back.order, r.order);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back.scores[i], r.scores[i], 1e-12);
  EXPECT_THROW(parse("rank,basket_index,score\n1,0,0.5\n1,1,0.5\n",
                     [](std::istream& is, const std::string& s) { return io::load_ranking(is, s); }),
               ParseError);
}

TEST(PrecisionCodecTest, RoundTrip) {
  // Values with short decimal forms survive the 12-digit text exactly.
  const io::PrecisionTable t{{1.0, 0.5, 0.75}, {1.0, 0.0, 0.5}, {1.0, 1.0, 1.0}};
  const std::string text = io::to_text([&](std::ostream& os) { io::save_precision(os, t); });
  EXPECT_EQ(parse(text, [](std::istream& is, const std::string& s) { return io::load_precision(is, s); }), t);
  EXPECT_EQ(parse_error_line([] {
              parse("m_ret,mean_p,min_p,max_p\n1,1,1,1\n3,1,1,1\n",
                    [](std::istream& is, const std::string& s) { return io::load_precision(is, s); });
            }),
            3u);
}

TEST(FileHelpersTest, MissingFileIsParseError) {
  EXPECT_THROW(io::load_file("/nonexistent/graph.txt", [](std::istream& is, const std::string& s) {
                 return io::load_graph(is, s);
               }),
               ParseError);
}

TEST(SettingsTest, LayeringRecordsSources) {
  Settings s = Settings::defaults();
  std::istringstream cfg("# comment\nn = 300   # trailing\nmodel=ba\n\nseed = 9\n");
  s.load_config(cfg, "cfg");
  s.set("seed", "11", "flag");
  EXPECT_EQ(s.entries().at("n").source, "file");
  EXPECT_EQ(s.entries().at("seed").source, "flag");
  EXPECT_EQ(s.entries().at("clusters").source, "default");

  const auto c = s.experiment_config();
  EXPECT_EQ(c.graph.model, GraphModel::kBarabasiAlbert);
  EXPECT_EQ(c.graph.n, 300u);
  EXPECT_EQ(c.graph.seed, 11u);  // graph_seed = auto follows the master seed
  EXPECT_EQ(c.radius, 0);
  EXPECT_EQ(c.num_clusters, 10u);
  EXPECT_EQ(c.centers.size(), 3u);
}

TEST(SettingsTest, ErrorsCarryLineNumbers) {
  Settings s = Settings::defaults();
  std::istringstream unknown("n = 10\nbogus = 1\n");
  EXPECT_EQ(parse_error_line([&] { s.load_config(unknown, "cfg"); }), 2u);
  std::istringstream no_eq("\n\nn 10\n");
  EXPECT_EQ(parse_error_line([&] { s.load_config(no_eq, "cfg"); }), 3u);

  Settings bad = Settings::defaults();
  bad.set("clusters", "ten", "flag");
  EXPECT_THROW(bad.experiment_config(), ParameterError);
  bad = Settings::defaults();
  bad.set("centers", "a,d", "flag");
  EXPECT_THROW(bad.experiment_config(), ParameterError);
  EXPECT_THROW(bad.set("nope", "1", "flag"), ParameterError);
}

TEST(SettingsTest, ManifestRoundTrip) {
  Settings s = Settings::defaults();
  s.set("n", "120", "flag");
  s.set("repetitions", "2", "file");
  s.set("clusters", "3", "flag");
  s.set("k_hidden", "5", "flag");
  s.set("locality", "0.1", "file");
  s.set("restarts", "1", "file");
  s.set("centers", "b", "flag");
  const auto result = run_experiment(s.experiment_config());
  RunManifest manifest{s, {"graph.txt"}};
  const auto j = manifest.to_json(result);
  EXPECT_EQ(j["trials"].size(), 1u);
  EXPECT_EQ(j["trials"][0]["spearman_eq10_vs_eq11"].size(), 2u);
  EXPECT_EQ(j["resolved"]["radius"], result.radius);

  const auto dir = std::filesystem::temp_directory_path() / "emptyspot_io_test";
  const auto path = dir / "manifest.json";
  io::save_file(path, [&](std::ostream& os) { os << j.dump(2); });
  const Settings back = load_manifest_settings(path);
  for (const auto& [key, e] : s.entries()) {
    EXPECT_EQ(back.raw(key), e.value) << key;
    EXPECT_EQ(back.entries().at(key).source, e.source) << key;
  }
  std::filesystem::remove_all(dir);
}

TEST(PlotTest, DegreeCsvAndSvg) {
  const Graph g = testing::star(3);
  const auto summary = degree_summary(g);
  const std::string csv =
      io::to_text([&](std::ostream& os) { plot::save_degree_csv(os, summary, g.node_count()); });
  EXPECT_NE(csv.find("1,3"), std::string::npos);
  plot::Figure fig{"degrees", "k", "P(k)", true, true,
                   {plot::degree_distribution_series(summary, g.node_count(), "star")}};
  const std::string svg = io::to_text([&](std::ostream& os) { plot::render_svg(os, fig); });
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace emptyspot
