#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "emptyspot/clustering.hpp"
#include "emptyspot/cooccurrence.hpp"
#include "emptyspot/error.hpp"
#include "emptyspot/interaction.hpp"

namespace emptyspot {

enum class ScoreVariant {
  // Mean over clusters of the largest inverse frequency among the basket's
  // members in that cluster.
  kInverseFrequency,
  // Mean over clusters of the smallest raw frequency among the basket's
  // members in that cluster (the simplified form as typeset). Not bounded
  // by 1 and ranks in the opposite sense; kept for comparison only.
  kMinFrequencyLiteral,
};

inline std::string_view to_string(ScoreVariant v) {
  return v == ScoreVariant::kInverseFrequency ? "eq10" : "eq11-literal";
}

inline ScoreVariant parse_score_variant(std::string_view s) {
  if (s == "eq10") return ScoreVariant::kInverseFrequency;
  if (s == "eq11-literal") return ScoreVariant::kMinFrequencyLiteral;
  throw ParameterError("unknown score variant '" + std::string(s) + "' (expected eq10 or eq11-literal)");
}

// Node id -> cluster index, or kNoCluster for nodes outside the clustering.
class ClusterLookup {
 public:
  static constexpr std::size_t kNoCluster = std::numeric_limits<std::size_t>::max();

  ClusterLookup(const Clustering& cl, std::size_t node_universe) : cluster_of_(node_universe, kNoCluster) {
    for (std::size_t r = 0; r < cl.node_ids.size(); ++r) {
      if (cl.node_ids[r] < node_universe) cluster_of_[cl.node_ids[r]] = cl.assignment[r];
    }
  }

  std::size_t operator()(NodeId v) const { return v < cluster_of_.size() ? cluster_of_[v] : kNoCluster; }

 private:
  std::vector<std::size_t> cluster_of_;
};

inline double basket_score(const Basket& b, const FrequencyTable& freq, const Clustering& cl,
                           const ClusterLookup& lookup,
                           ScoreVariant variant = ScoreVariant::kInverseFrequency) {
  // Smallest frequency per cluster among the basket's clustered members;
  // 0 marks an empty intersection.
  std::vector<std::size_t> min_freq(cl.num_clusters, 0);
  for (NodeId v : b.members) {
    const std::size_t c = lookup(v);
    if (c == ClusterLookup::kNoCluster) continue;
    const std::size_t f = freq[v];
    if (f == 0) {
      throw StructuralError("basket_score: node " + std::to_string(v) +
                            " is clustered but has zero frequency");
    }
    if (min_freq[c] == 0 || f < min_freq[c]) min_freq[c] = f;
  }
  double sum = 0.0;
  for (std::size_t f : min_freq) {
    if (f == 0) continue;
    sum += variant == ScoreVariant::kInverseFrequency ? 1.0 / static_cast<double>(f)
                                                      : static_cast<double>(f);
  }
  return sum / static_cast<double>(cl.num_clusters);
}

inline double basket_score(const Basket& b, const FrequencyTable& freq, const Clustering& cl,
                           ScoreVariant variant = ScoreVariant::kInverseFrequency) {
  std::size_t universe = freq.counts.size();
  for (NodeId v : cl.node_ids) universe = std::max<std::size_t>(universe, v + 1);
  return basket_score(b, freq, cl, ClusterLookup(cl, universe), variant);
}

struct RankedBaskets {
  std::vector<BasketIndex> order;
  // Indexed by basket index, not by rank.
  std::vector<double> scores;

  double score_at_rank(std::size_t rank) const { return scores[order[rank]]; }
};

// Scores every basket and sorts by descending score, ascending basket index
// on ties.
inline RankedBaskets rank_baskets(const Dataset& d, const FrequencyTable& freq, const Clustering& cl,
                                  ScoreVariant variant = ScoreVariant::kInverseFrequency) {
  const ClusterLookup lookup(cl, d.node_universe);
  RankedBaskets r;
  r.scores.resize(d.size());
  for (const auto& b : d.baskets) r.scores[b.index] = basket_score(b, freq, cl, lookup, variant);
  r.order.resize(d.size());
  std::iota(r.order.begin(), r.order.end(), BasketIndex{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](BasketIndex x, BasketIndex y) { return r.scores[x] > r.scores[y]; });
  return r;
}

// Spearman rank correlation between two complete rankings of the same
// baskets. Rankings carry no ties, so 1 - 6 sum(d^2) / (n (n^2 - 1)) is exact.
inline double spearman_correlation(const RankedBaskets& x, const RankedBaskets& y) {
  const std::size_t n = x.order.size();
  if (y.order.size() != n) throw StructuralError("spearman: rankings differ in length");
  if (n < 2) return 1.0;
  std::vector<std::size_t> pos_x(n), pos_y(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos_x[x.order[i]] = i;
    pos_y[y.order[i]] = i;
  }
  double sum_sq = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const double diff = static_cast<double>(pos_x[b]) - static_cast<double>(pos_y[b]);
    sum_sq += diff * diff;
  }
  const double nd = static_cast<double>(n);
  return 1.0 - 6.0 * sum_sq / (nd * (nd * nd - 1.0));
}

}  // namespace emptyspot
