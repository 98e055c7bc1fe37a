#include <gtest/gtest.h>

#include "emptyspot/cooccurrence.hpp"
#include "random_instances.hpp"

namespace emptyspot {
namespace {

// {a,b}, {a,c}, {b,c} with a=0, b=1, c=2.
Dataset triangle_baskets() { return Dataset{{{0, {0, 1}}, {1, {0, 2}}, {2, {1, 2}}}, 4}; }

TEST(FrequencyTest, Counts) {
  const auto f = frequency(triangle_baskets());
  EXPECT_EQ(f.counts, (std::vector<std::size_t>{2, 2, 2, 0}));
  EXPECT_EQ(f.dataset_size, 3u);

  const auto g = frequency(Dataset{{{0, {1}}, {1, {0, 1}}}, 2});
  EXPECT_EQ(g[1], 2u);
}

TEST(JaccardTest, Examples) {
  const Dataset d = triangle_baskets();
  EXPECT_DOUBLE_EQ(jaccard(d, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(d, 0, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard(d, 0, 3), 0.0);
  EXPECT_DOUBLE_EQ(jaccard(d, 3, 3), 0.0);

  const Dataset apart{{{0, {0}}, {1, {1}}}, 2};
  EXPECT_DOUBLE_EQ(jaccard(apart, 0, 1), 0.0);
}

TEST(ClosenessMatrixTest, SingleBasket) {
  const auto m = closeness_matrix(Dataset{{{0, {2, 5}}}, 6});
  ASSERT_EQ(m.dimension(), 2u);
  EXPECT_EQ(m.node_ids(), (std::vector<NodeId>{2, 5}));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) EXPECT_DOUBLE_EQ(m.at(r, c), 1.0);
  EXPECT_EQ(m.row_of(3), ClosenessMatrix::kAbsent);
}

TEST(ClosenessMatrixTest, TriangleOffDiagonals) {
  const auto m = closeness_matrix(triangle_baskets());
  ASSERT_EQ(m.dimension(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(m.at(r, c), r == c ? 1.0 : 1.0 / 3.0);
  }
}

TEST(ClosenessMatrixTest, AllEmptyIsStructuralError) {
  EXPECT_THROW(closeness_matrix(Dataset{{{0, {}}, {1, {}}}, 3}), StructuralError);
}

TEST(ClosenessMatrixTest, BitsetSpansMultipleWords) {
  // 130 baskets force three 64-bit words per row.
  Dataset d;
  d.node_universe = 3;
  for (BasketIndex i = 0; i < 130; ++i) {
    std::vector<NodeId> m{0};
    if (i % 2 == 0) m.push_back(1);
    if (i >= 100) m.push_back(2);
    d.baskets.push_back({i, m});
  }
  const auto m = closeness_matrix(d);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 65.0 / 130.0);
  EXPECT_DOUBLE_EQ(m.at(1, 2), 15.0 / 80.0);
}

TEST(ClosenessMatrixTest, MatchesBasketSetOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = testing::random_dataset(rng, 8, 10);
    bool any = false;
    for (const auto& b : d.baskets) any = any || !b.members.empty();
    if (!any) continue;
    const auto m = closeness_matrix(d);
    for (std::size_t r = 0; r < m.dimension(); ++r) {
      EXPECT_DOUBLE_EQ(m.at(r, r), 1.0);
      for (std::size_t c = 0; c < m.dimension(); ++c) {
        const double expected = testing::jaccard_oracle(d, m.node_at(r), m.node_at(c));
        EXPECT_EQ(m.at(r, c), expected);
        EXPECT_EQ(m.at(r, c), m.at(c, r));
        EXPECT_EQ(jaccard(d, m.node_at(r), m.node_at(c)), expected);
        const bool same_baskets = testing::basket_set(d, m.node_at(r)) == testing::basket_set(d, m.node_at(c));
        EXPECT_EQ(m.at(r, c) == 1.0, same_baskets);
      }
    }
  }
}

}  // namespace
}  // namespace emptyspot
