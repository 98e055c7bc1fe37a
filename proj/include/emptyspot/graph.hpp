#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emptyspot/error.hpp"
#include "emptyspot/rng.hpp"

namespace emptyspot {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Undirected simple graph over dense node ids 0..node_count()-1.
// Neighbor lists are kept sorted.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adjacency_(node_count) {}

  // Builds a graph from an edge list. Self-loops, out-of-range ids and
  // duplicate edges are rejected.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    Graph g(node_count);
    for (auto [u, v] : edges) {
      if (u >= node_count || v >= node_count) {
        throw StructuralError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                              ") references a node outside 0.." + std::to_string(node_count - 1));
      }
      if (u == v) throw StructuralError("self-loop on node " + std::to_string(u));
      if (!g.add_edge(u, v)) {
        throw StructuralError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      }
    }
    return g;
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& a = adjacency_[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  // Returns false (and leaves the graph unchanged) for self-loops and
  // existing edges.
  bool add_edge(NodeId u, NodeId v) {
    if (u == v || has_edge(u, v)) return false;
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
    ++edge_count_;
    return true;
  }

  bool remove_edge(NodeId u, NodeId v) {
    if (u == v || !has_edge(u, v)) return false;
    erase_sorted(adjacency_[u], v);
    erase_sorted(adjacency_[v], u);
    --edge_count_;
    return true;
  }

  // Edges as (i, j) with i < j, sorted lexicographically.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
      for (NodeId v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  bool is_connected() const {
    if (adjacency_.empty()) return true;
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adjacency_[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    return reached == adjacency_.size();
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  static void insert_sorted(std::vector<NodeId>& a, NodeId v) {
    a.insert(std::lower_bound(a.begin(), a.end(), v), v);
  }
  static void erase_sorted(std::vector<NodeId>& a, NodeId v) {
    a.erase(std::lower_bound(a.begin(), a.end(), v));
  }

  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

inline constexpr int kUnreachable = -1;

// Hop counts from `source`; kUnreachable for nodes in other components.
inline std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Connectivity / feasibility retry budget shared by the randomized generators.
inline constexpr int kMaxGenerationAttempts = 100;

// Barabasi-Albert growth from a complete seed graph on m_links+1 nodes. Each
// new node attaches to m_links distinct existing nodes chosen with
// probability proportional to their current degree.
inline Graph generate_ba(std::size_t n, std::size_t m_links, std::uint64_t seed) {
  if (m_links < 1) throw ParameterError("ba: m_links must be >= 1");
  if (n < m_links + 1) throw ParameterError("ba: n must be >= m_links + 1");

  Rng rng = Rng::substream(seed, 0);
  Graph g(n);
  // Every edge endpoint appears once, so a uniform draw is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * (m_links * n + m_links * m_links));
  const auto seed_nodes = static_cast<NodeId>(m_links + 1);
  for (NodeId u = 0; u < seed_nodes; ++u) {
    for (NodeId v = u + 1; v < seed_nodes; ++v) {
      g.add_edge(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> targets;
  for (auto v = seed_nodes; v < n; ++v) {
    targets.clear();
    while (targets.size() < m_links) {
      NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      g.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

// Mean of the exponential law P(d) ~ exp(-lambda (d - d_min)) truncated to
// the integers [d_min, d_max].
inline double truncated_exponential_mean(int d_min, int d_max, double lambda) {
  double norm = 0.0, first = 0.0;
  for (int d = d_min; d <= d_max; ++d) {
    double w = std::exp(-lambda * (d - d_min));
    norm += w;
    first += d * w;
  }
  return first / norm;
}

namespace detail {

// Degree counts for [d_min, d_max] apportioned to n nodes by largest
// remainder (ties to the smaller degree), so the realized histogram tracks
// the law up to rounding.
inline std::vector<std::size_t> truncated_exponential_counts(std::size_t n, int d_min, int d_max,
                                                             double lambda) {
  std::vector<double> w;
  double norm = 0.0;
  for (int d = d_min; d <= d_max; ++d) {
    w.push_back(std::exp(-lambda * (d - d_min)));
    norm += w.back();
  }
  std::vector<std::size_t> counts(w.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double exact = static_cast<double>(n) * w[k] / norm;
    counts[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[k];
    remainders.emplace_back(exact - std::floor(exact), k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i].second];
  return counts;
}

// Stub pairing. With locality <= 0 the stubs are shuffled and paired in
// order (plain configuration model). With locality > 0 nodes get uniform
// positions in the unit square and each free stub picks a partner with
// weight free_stubs(v) * exp(-distance / locality); a stub with no valid
// partner is paired with any free stub and left to the repair pass.
inline std::vector<Edge> pair_stubs(const std::vector<int>& degrees, double locality, Rng& rng) {
  const std::size_t n = degrees.size();
  std::vector<Edge> pairs;
  if (locality <= 0.0) {
    std::vector<NodeId> stubs;
    for (NodeId v = 0; v < n; ++v) {
      for (int k = 0; k < degrees[v]; ++k) stubs.push_back(v);
    }
    rng.shuffle(stubs);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) pairs.emplace_back(stubs[i], stubs[i + 1]);
    return pairs;
  }

  std::vector<double> x(n), y(n);
  for (std::size_t v = 0; v < n; ++v) {
    x[v] = rng.uniform();
    y[v] = rng.uniform();
  }
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  rng.shuffle(order);

  std::vector<int> free_stubs = degrees;
  std::vector<std::vector<NodeId>> linked(n);
  std::vector<double> weight(n);
  for (NodeId u : order) {
    while (free_stubs[u] > 0) {
      double total = 0.0;
      for (NodeId v = 0; v < n; ++v) {
        weight[v] = 0.0;
        if (v == u || free_stubs[v] == 0) continue;
        if (std::find(linked[u].begin(), linked[u].end(), v) != linked[u].end()) continue;
        weight[v] = free_stubs[v] * std::exp(-std::hypot(x[u] - x[v], y[u] - y[v]) / locality);
        total += weight[v];
      }
      NodeId pick = u;
      if (total > 0.0) {
        double r = rng.uniform() * total;
        for (NodeId v = 0; v < n; ++v) {
          if (weight[v] <= 0.0) continue;
          pick = v;
          r -= weight[v];
          if (r < 0.0) break;
        }
      } else {
        // Only invalid partners remain (u itself or existing neighbors).
        for (NodeId v = 0; v < n; ++v) {
          if (free_stubs[v] > (v == u ? 1 : 0)) {
            pick = v;
            break;
          }
        }
      }
      pairs.emplace_back(u, pick);
      linked[u].push_back(pick);
      linked[pick].push_back(u);
      --free_stubs[u];
      --free_stubs[pick];
    }
  }
  return pairs;
}

// Adds the valid pairs; invalid pairs (self-loops, multi-edges) are
// repaired by double-edge swaps against random existing edges. Returns
// false when the repair budget runs out.
inline bool realize_pairs(Graph& g, const std::vector<Edge>& pairs, Rng& rng) {
  std::vector<Edge> edge_list;
  std::vector<Edge> bad;
  for (auto [u, v] : pairs) {
    if (g.add_edge(u, v)) {
      edge_list.emplace_back(u, v);
    } else {
      bad.emplace_back(u, v);
    }
  }

  constexpr int kSwapTries = 1000;
  for (auto [u, v] : bad) {
    bool fixed = false;
    for (int t = 0; t < kSwapTries && !fixed; ++t) {
      if (g.add_edge(u, v)) {
        edge_list.emplace_back(u, v);
        fixed = true;
        break;
      }
      if (edge_list.empty()) break;
      std::size_t idx = rng.below(edge_list.size());
      auto [x, y] = edge_list[idx];
      if (rng.bernoulli(0.5)) std::swap(x, y);
      // Replace (x,y) + pending (u,v) with (u,x) + (v,y).
      if (u == x || v == y || g.has_edge(u, x) || g.has_edge(v, y)) continue;
      if (std::minmax(u, x) == std::minmax(v, y)) continue;
      g.remove_edge(x, y);
      g.add_edge(u, x);
      g.add_edge(v, y);
      edge_list[idx] = {u, x};
      edge_list.emplace_back(v, y);
      fixed = true;
    }
    if (!fixed) return false;
  }
  return true;
}

}  // namespace detail

// Default decay rate of the homogeneous degree law: the fitted exponent 3.1
// on normalized degree d / mu(d) with mu(d) = 3.9.
inline constexpr double kDefaultHomogeneousLambda = 3.1 / 3.9;

// Homogeneous network with an exponential degree law P(d) ~ exp(-lambda
// (d - d_min)) on [d_min, d_max]. The degree histogram is apportioned to
// the law, shuffled over nodes and realized by a configuration model with
// rewiring repair (see detail::pair_stubs for `locality`). Attempts that
// fail to realize the sequence or come out disconnected are retried on a
// fresh substream.
inline Graph generate_homogeneous(std::size_t n, int d_min, int d_max, double lambda,
                                  std::uint64_t seed, double locality = 0.0) {
  if (d_min < 2 || d_min > d_max || static_cast<std::size_t>(d_max) >= n) {
    throw ParameterError("homogeneous: require 2 <= d_min <= d_max < n");
  }
  if (!(lambda > 0.0)) throw ParameterError("homogeneous: lambda must be > 0");
  if (!(locality >= 0.0)) throw ParameterError("homogeneous: locality must be >= 0");
  if (d_min == d_max && (n * static_cast<std::size_t>(d_min)) % 2 != 0) {
    throw ParameterError("homogeneous: n * degree must be even for a regular sequence");
  }

  const auto counts = detail::truncated_exponential_counts(n, d_min, d_max, lambda);
  std::vector<int> sequence;
  long long sum = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    sequence.insert(sequence.end(), counts[k], d_min + static_cast<int>(k));
    sum += static_cast<long long>(counts[k]) * (d_min + static_cast<int>(k));
  }
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(attempt));
    std::vector<int> degrees = sequence;
    rng.shuffle(degrees);
    if (sum % 2 != 0) {
      // Odd stub count: move one random entry by one degree.
      int& d = degrees[rng.below(n)];
      d += d < d_max ? 1 : -1;
    }
    Graph g(n);
    const auto pairs = detail::pair_stubs(degrees, locality, rng);
    if (!detail::realize_pairs(g, pairs, rng)) continue;
    if (g.is_connected()) return g;
  }
  throw GenerationError("homogeneous: no connected simple realization within " +
                        std::to_string(kMaxGenerationAttempts) + " attempts");
}

// Watts-Strogatz small world: ring lattice of even degree ring_degree, each
// lattice edge rewired with probability rewire_prob. Regenerated until
// connected.
inline Graph generate_ws(std::size_t n, std::size_t ring_degree, double rewire_prob,
                         std::uint64_t seed) {
  if (ring_degree % 2 != 0 || ring_degree < 2 || ring_degree >= n) {
    throw ParameterError("ws: ring_degree must be even with 2 <= ring_degree < n");
  }
  if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0)) {
    throw ParameterError("ws: rewire_prob must be in [0, 1]");
  }
  const std::size_t half = ring_degree / 2;
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(attempt));
    Graph g(n);
    for (NodeId i = 0; i < n; ++i) {
      for (std::size_t j = 1; j <= half; ++j) g.add_edge(i, static_cast<NodeId>((i + j) % n));
    }
    for (std::size_t j = 1; j <= half; ++j) {
      for (NodeId i = 0; i < n; ++i) {
        if (!rng.bernoulli(rewire_prob)) continue;
        auto v = static_cast<NodeId>((i + j) % n);
        if (!g.has_edge(i, v) || g.degree(i) >= n - 1) continue;
        NodeId w;
        do {
          w = static_cast<NodeId>(rng.below(n));
        } while (w == i || g.has_edge(i, w));
        g.remove_edge(i, v);
        g.add_edge(i, w);
      }
    }
    if (g.is_connected()) return g;
  }
  throw GenerationError("ws: no connected graph within " +
                        std::to_string(kMaxGenerationAttempts) + " attempts");
}

enum class GraphModel { kBarabasiAlbert, kHomogeneous, kWattsStrogatz };

inline std::string_view to_string(GraphModel m) {
  switch (m) {
    case GraphModel::kBarabasiAlbert: return "ba";
    case GraphModel::kHomogeneous: return "homogeneous";
    case GraphModel::kWattsStrogatz: return "ws";
  }
  return "?";
}

inline GraphModel parse_graph_model(std::string_view s) {
  if (s == "ba") return GraphModel::kBarabasiAlbert;
  if (s == "homogeneous") return GraphModel::kHomogeneous;
  if (s == "ws") return GraphModel::kWattsStrogatz;
  throw ParameterError("unknown graph model '" + std::string(s) + "' (expected ba, homogeneous or ws)");
}

// Generator choice plus every generator parameter; only the fields of the
// selected model are read.
struct GraphSpec {
  GraphModel model = GraphModel::kHomogeneous;
  std::size_t n = 995;
  std::size_t m_links = 2;
  int d_min = 3;
  int d_max = 8;
  double lambda = kDefaultHomogeneousLambda;
  // Spatial length scale of stub matching; 0 = plain configuration model.
  double locality = 0.0;
  std::size_t ring_degree = 4;
  double rewire_prob = 0.1;
  std::uint64_t seed = 1;
};

inline Graph generate(const GraphSpec& spec) {
  switch (spec.model) {
    case GraphModel::kBarabasiAlbert: return generate_ba(spec.n, spec.m_links, spec.seed);
    case GraphModel::kHomogeneous:
      return generate_homogeneous(spec.n, spec.d_min, spec.d_max, spec.lambda, spec.seed, spec.locality);
    case GraphModel::kWattsStrogatz:
      return generate_ws(spec.n, spec.ring_degree, spec.rewire_prob, spec.seed);
  }
  throw ParameterError("unknown graph model");
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

struct DegreeSummary {
  std::map<std::size_t, std::size_t> histogram;
  double mean = 0.0;
  double std = 0.0;
  double cv = 0.0;
  double gini = 0.0;
};

inline DegreeSummary degree_summary(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw ParameterError("degree_summary: graph needs at least 2 nodes");
  DegreeSummary s;
  std::vector<std::size_t> degrees(n);
  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    degrees[v] = g.degree(v);
    ++s.histogram[degrees[v]];
    sum += static_cast<double>(degrees[v]);
  }
  s.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (auto d : degrees) sq += (static_cast<double>(d) - s.mean) * (static_cast<double>(d) - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(n));
  s.cv = s.mean > 0.0 ? s.std / s.mean : 0.0;

  // Gini over the sorted sequence: 2 sum(i x_i) / (n sum x) - (n + 1) / n.
  std::sort(degrees.begin(), degrees.end());
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) weighted += static_cast<double>(i + 1) * static_cast<double>(degrees[i]);
  if (sum > 0.0) {
    const double nd = static_cast<double>(n);
    s.gini = std::max(0.0, 2.0 * weighted / (nd * sum) - (nd + 1.0) / nd);
  }
  return s;
}

struct DistanceStats {
  NodeId node = 0;
  double mean_dist = 0.0;
  double std_dist = 0.0;
};

// Mean and population standard deviation of the hop counts from `node` to
// every other node.
inline DistanceStats distance_stats(const Graph& g, NodeId node) {
  const std::size_t n = g.node_count();
  if (node >= n) throw ParameterError("distance_stats: node out of range");
  if (n < 2) throw ParameterError("distance_stats: graph needs at least 2 nodes");
  const auto dist = bfs_distances(g, node);
  // Integer accumulation keeps equal distance multisets bit-identical.
  std::uint64_t sum = 0, sum_sq = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (dist[v] == kUnreachable) {
      throw StructuralError("distance_stats: graph is disconnected (node " + std::to_string(v) +
                            " unreachable from " + std::to_string(node) + ")");
    }
    sum += static_cast<std::uint64_t>(dist[v]);
    sum_sq += static_cast<std::uint64_t>(dist[v]) * static_cast<std::uint64_t>(dist[v]);
  }
  const std::uint64_t others = n - 1;
  DistanceStats s;
  s.node = node;
  s.mean_dist = static_cast<double>(sum) / static_cast<double>(others);
  const double var = static_cast<double>(sum_sq * others - sum * sum) /
                     (static_cast<double>(others) * static_cast<double>(others));
  s.std_dist = std::sqrt(var);
  return s;
}

// Trial-case centers: a = max degree, b = min distance std, c = min distance
// mean. Ties go to the smallest node id.
struct TargetNodes {
  NodeId a = 0;
  NodeId b = 0;
  NodeId c = 0;
};

inline TargetNodes select_targets(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw ParameterError("select_targets: graph needs at least 2 nodes");
  TargetNodes t;
  DistanceStats best_std = distance_stats(g, 0);
  DistanceStats best_mean = best_std;
  for (NodeId v = 1; v < n; ++v) {
    if (g.degree(v) > g.degree(t.a)) t.a = v;
    DistanceStats s = distance_stats(g, v);
    if (s.std_dist < best_std.std_dist) best_std = s;
    if (s.mean_dist < best_mean.mean_dist) best_mean = s;
  }
  t.b = best_std.node;
  t.c = best_mean.node;
  return t;
}

}  // namespace emptyspot
