#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <iterator>
#include <string>
#include <vector>

#include "emptyspot/error.hpp"
#include "emptyspot/graph.hpp"

namespace emptyspot {

using BasketIndex = std::size_t;

// One interaction record: the set of nodes observed together.
// Members are kept sorted and unique.
struct Basket {
  BasketIndex index = 0;
  std::vector<NodeId> members;

  bool contains(NodeId v) const { return std::binary_search(members.begin(), members.end(), v); }

  friend bool operator==(const Basket&, const Basket&) = default;
};

struct Dataset {
  std::vector<Basket> baskets;
  std::size_t node_universe = 0;

  std::size_t size() const { return baskets.size(); }

  // Throws StructuralError unless indices are 0..size()-1 and members are
  // sorted, unique and below node_universe.
  void validate() const {
    for (std::size_t i = 0; i < baskets.size(); ++i) {
      const auto& b = baskets[i];
      if (b.index != i) {
        throw StructuralError("basket at position " + std::to_string(i) + " has index " +
                              std::to_string(b.index));
      }
      for (std::size_t k = 0; k < b.members.size(); ++k) {
        if (b.members[k] >= node_universe) {
          throw StructuralError("basket " + std::to_string(i) + " member " +
                                std::to_string(b.members[k]) + " outside node universe");
        }
        if (k > 0 && b.members[k - 1] >= b.members[k]) {
          throw StructuralError("basket " + std::to_string(i) + " members not sorted/unique");
        }
      }
    }
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// One basket per initiator node j: every node within `radius` hops of j.
inline Dataset simulate_baskets(const Graph& g, int radius) {
  if (radius < 1) throw ParameterError("simulate_baskets: radius must be >= 1");
  Dataset d;
  d.node_universe = g.node_count();
  d.baskets.resize(g.node_count());
  for (NodeId j = 0; j < g.node_count(); ++j) {
    const auto dist = bfs_distances(g, j);
    Basket& b = d.baskets[j];
    b.index = j;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (dist[v] != kUnreachable && dist[v] <= radius) b.members.push_back(v);
    }
  }
  return d;
}

// Mean over initiators of |ball(j, radius)| / |n|.
inline double coverage_fraction(const Graph& g, int radius) {
  if (radius < 1) throw ParameterError("coverage_fraction: radius must be >= 1");
  const std::size_t n = g.node_count();
  std::size_t total = 0;
  for (NodeId j = 0; j < n; ++j) {
    const auto dist = bfs_distances(g, j);
    total += static_cast<std::size_t>(std::count_if(
        dist.begin(), dist.end(), [&](int x) { return x != kUnreachable && x <= radius; }));
  }
  return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n));
}

inline constexpr double kDefaultCoverageTarget = 0.15;

// Smallest radius whose coverage fraction reaches `target`. The sweep stops
// at saturation (coverage 1), so it always terminates on a connected graph.
inline int select_radius(const Graph& g, double target = kDefaultCoverageTarget) {
  if (!(target > 0.0 && target <= 1.0)) throw ParameterError("select_radius: target must be in (0, 1]");
  for (int r = 1;; ++r) {
    double c = coverage_fraction(g, r);
    if (c >= target || c >= 1.0) return r;
    if (static_cast<std::size_t>(r) > g.node_count()) {
      throw StructuralError("select_radius: coverage never reaches target");
    }
  }
}

struct HidingSpec {
  NodeId center = 0;
  std::size_t k_hidden = 10;
};

// First min(k_hidden, |n|) nodes of a breadth-first expansion from the
// center, neighbors visited in ascending id. Returned sorted.
inline std::vector<NodeId> build_hidden_set(const Graph& g, const HidingSpec& spec) {
  if (spec.center >= g.node_count()) throw ParameterError("build_hidden_set: center out of range");
  if (spec.k_hidden < 1) throw ParameterError("build_hidden_set: k_hidden must be >= 1");
  const std::size_t limit = std::min(spec.k_hidden, g.node_count());
  std::vector<NodeId> order{spec.center};
  std::vector<char> seen(g.node_count(), 0);
  seen[spec.center] = 1;
  for (std::size_t head = 0; head < order.size() && order.size() < limit; ++head) {
    for (NodeId v : g.neighbors(order[head])) {
      if (seen[v]) continue;
      seen[v] = 1;
      order.push_back(v);
      if (order.size() == limit) break;
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

struct HiddenTruth {
  std::vector<NodeId> hidden_nodes;
  std::vector<BasketIndex> modified_baskets;
  std::vector<NodeId> gateway_nodes;

  bool is_modified(BasketIndex i) const {
    return std::binary_search(modified_baskets.begin(), modified_baskets.end(), i);
  }

  friend bool operator==(const HiddenTruth&, const HiddenTruth&) = default;
};

struct HidingResult {
  Dataset observed;
  HiddenTruth truth;
};

// Deletes the hidden nodes from every basket. Indices and order are kept;
// baskets emptied by the deletion stay in the dataset.
inline HidingResult hide_nodes(const Dataset& original, std::vector<NodeId> hidden, const Graph& g) {
  std::sort(hidden.begin(), hidden.end());
  hidden.erase(std::unique(hidden.begin(), hidden.end()), hidden.end());
  if (hidden.empty()) throw ParameterError("hide_nodes: hidden set is empty");
  if (hidden.back() >= original.node_universe || hidden.back() >= g.node_count()) {
    throw ParameterError("hide_nodes: hidden node outside node universe");
  }
  if (hidden.size() >= original.node_universe) throw ParameterError("hide_nodes: cannot hide every node");

  HidingResult r;
  r.observed.node_universe = original.node_universe;
  r.observed.baskets.reserve(original.size());
  for (const auto& b : original.baskets) {
    Basket kept{b.index, {}};
    std::set_difference(b.members.begin(), b.members.end(), hidden.begin(), hidden.end(),
                        std::back_inserter(kept.members));
    if (kept.members.size() != b.members.size()) r.truth.modified_baskets.push_back(b.index);
    r.observed.baskets.push_back(std::move(kept));
  }
  std::vector<char> is_hidden(g.node_count(), 0);
  for (NodeId h : hidden) is_hidden[h] = 1;
  for (NodeId h : hidden) {
    for (NodeId v : g.neighbors(h)) {
      if (!is_hidden[v]) r.truth.gateway_nodes.push_back(v);
    }
  }
  std::sort(r.truth.gateway_nodes.begin(), r.truth.gateway_nodes.end());
  r.truth.gateway_nodes.erase(std::unique(r.truth.gateway_nodes.begin(), r.truth.gateway_nodes.end()),
                              r.truth.gateway_nodes.end());
  r.truth.hidden_nodes = std::move(hidden);
  return r;
}

}  // namespace emptyspot
