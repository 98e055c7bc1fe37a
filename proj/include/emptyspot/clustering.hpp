#pragma once

#include <cstdint>
#include <vector>

#include "emptyspot/cooccurrence.hpp"
#include "emptyspot/error.hpp"
#include "emptyspot/rng.hpp"

namespace emptyspot {

// Partition of the closeness-matrix universe. `assignment` is aligned with
// `node_ids` (matrix row order); `medoids` holds node ids.
struct Clustering {
  std::size_t num_clusters = 0;
  std::vector<NodeId> medoids;
  std::vector<NodeId> node_ids;
  std::vector<std::size_t> assignment;
  std::size_t iterations_run = 0;
  // Nodes with zero closeness to every medoid in the final assignment; they
  // fall into cluster 0.
  std::size_t orphan_count = 0;
  // Objective after every assignment and every medoid update.
  std::vector<double> objective_trace;

  std::vector<NodeId> members(std::size_t cluster) const {
    std::vector<NodeId> out;
    for (std::size_t r = 0; r < node_ids.size(); ++r) {
      if (assignment[r] == cluster) out.push_back(node_ids[r]);
    }
    return out;
  }
};

namespace detail {

// Sum over clusters of J(medoid, member) for non-medoid members, in row
// coordinates.
inline double objective_rows(const ClosenessMatrix& m, const std::vector<std::size_t>& medoid_rows,
                             const std::vector<std::size_t>& assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.size(); ++r) {
    const std::size_t med = medoid_rows[assignment[r]];
    if (med != r) total += m.at(med, r);
  }
  return total;
}

struct KMedoidRun {
  std::vector<std::size_t> medoid_rows;
  std::vector<std::size_t> assignment;
  std::size_t iterations = 0;
  std::size_t orphans = 0;
  std::vector<double> trace;
};

inline std::size_t assign_rows(const ClosenessMatrix& m, const std::vector<std::size_t>& medoid_rows,
                               std::vector<std::size_t>& assignment) {
  const std::size_t dim = m.dimension();
  std::vector<std::size_t> medoid_cluster(dim, ClosenessMatrix::kAbsent);
  for (std::size_t j = 0; j < medoid_rows.size(); ++j) medoid_cluster[medoid_rows[j]] = j;
  std::size_t orphans = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    if (medoid_cluster[r] != ClosenessMatrix::kAbsent) {
      assignment[r] = medoid_cluster[r];
      continue;
    }
    std::size_t best = 0;
    double best_j = m.at(medoid_rows[0], r);
    for (std::size_t j = 1; j < medoid_rows.size(); ++j) {
      double v = m.at(medoid_rows[j], r);
      if (v > best_j) {
        best_j = v;
        best = j;
      }
    }
    if (best_j == 0.0) ++orphans;
    assignment[r] = best;
  }
  return orphans;
}

// Returns true when any medoid changed.
inline bool update_medoids(const ClosenessMatrix& m, std::vector<std::size_t>& medoid_rows,
                           const std::vector<std::size_t>& assignment) {
  const std::size_t k = medoid_rows.size();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t r = 0; r < assignment.size(); ++r) members[assignment[r]].push_back(r);

  auto closeness_sum = [&](std::size_t cand, const std::vector<std::size_t>& cluster) {
    double s = 0.0;
    for (std::size_t r : cluster) {
      if (r != cand) s += m.at(cand, r);
    }
    return s;
  };

  bool changed = false;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t best = medoid_rows[j];
    double best_sum = closeness_sum(best, members[j]);
    for (std::size_t cand : members[j]) {
      double s = closeness_sum(cand, members[j]);
      if (s > best_sum) {
        best_sum = s;
        best = cand;
      }
    }
    if (best != medoid_rows[j]) {
      medoid_rows[j] = best;
      changed = true;
    }
  }
  return changed;
}

inline KMedoidRun kmedoid_once(const ClosenessMatrix& m, std::size_t k, Rng& rng, std::size_t max_iter) {
  const std::size_t dim = m.dimension();
  KMedoidRun run;
  std::vector<std::size_t> rows(dim);
  for (std::size_t r = 0; r < dim; ++r) rows[r] = r;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t pick = i + static_cast<std::size_t>(rng.below(dim - i));
    std::swap(rows[i], rows[pick]);
  }
  run.medoid_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
  run.assignment.assign(dim, 0);

  run.orphans = assign_rows(m, run.medoid_rows, run.assignment);
  run.trace.push_back(objective_rows(m, run.medoid_rows, run.assignment));
  while (run.iterations < max_iter) {
    ++run.iterations;
    if (!update_medoids(m, run.medoid_rows, run.assignment)) break;
    run.trace.push_back(objective_rows(m, run.medoid_rows, run.assignment));
    run.orphans = assign_rows(m, run.medoid_rows, run.assignment);
    run.trace.push_back(objective_rows(m, run.medoid_rows, run.assignment));
  }
  return run;
}

}  // namespace detail

// k-medoid over Jaccard closeness: assign every node to the medoid it is
// closest to, then move each medoid to the member with maximal summed
// closeness, until the medoid set is stable or max_iter updates have run.
//
// Ties: assignment goes to the lowest cluster index; a medoid update keeps
// the incumbent when tied, otherwise the lowest node id wins. With
// restarts > 1 the run with the largest final objective is kept (earliest
// on ties); restart r draws its initial medoids from substream r of `seed`.
inline Clustering kmedoid(const ClosenessMatrix& m, std::size_t num_clusters, std::uint64_t seed,
                          std::size_t max_iter, std::size_t restarts = 1) {
  if (num_clusters < 1 || num_clusters > m.dimension()) {
    throw ParameterError("kmedoid: num_clusters must be in [1, " + std::to_string(m.dimension()) + "]");
  }
  if (max_iter < 1) throw ParameterError("kmedoid: max_iter must be >= 1");
  if (restarts < 1) throw ParameterError("kmedoid: restarts must be >= 1");

  detail::KMedoidRun best;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng = Rng::substream(seed, r);
    detail::KMedoidRun run = detail::kmedoid_once(m, num_clusters, rng, max_iter);
    if (r == 0 || run.trace.back() > best.trace.back()) best = std::move(run);
  }

  Clustering cl;
  cl.num_clusters = num_clusters;
  cl.node_ids = m.node_ids();
  for (std::size_t row : best.medoid_rows) cl.medoids.push_back(m.node_at(row));
  cl.assignment = std::move(best.assignment);
  cl.iterations_run = best.iterations;
  cl.orphan_count = best.orphans;
  cl.objective_trace = std::move(best.trace);
  return cl;
}

// Total within-cluster closeness to the medoids, medoid self-terms excluded.
inline double objective(const Clustering& cl, const ClosenessMatrix& m) {
  if (cl.node_ids != m.node_ids() || cl.assignment.size() != m.dimension()) {
    throw StructuralError("objective: clustering and matrix cover different nodes");
  }
  if (cl.medoids.size() != cl.num_clusters) throw StructuralError("objective: medoid count mismatch");
  std::vector<std::size_t> medoid_rows;
  for (std::size_t j = 0; j < cl.medoids.size(); ++j) {
    std::size_t row = m.row_of(cl.medoids[j]);
    if (row == ClosenessMatrix::kAbsent || cl.assignment[row] != j) {
      throw StructuralError("objective: medoid " + std::to_string(cl.medoids[j]) +
                            " is not a member of cluster " + std::to_string(j));
    }
    medoid_rows.push_back(row);
  }
  for (std::size_t a : cl.assignment) {
    if (a >= cl.num_clusters) throw StructuralError("objective: cluster index out of range");
  }
  return detail::objective_rows(m, medoid_rows, cl.assignment);
}

}  // namespace emptyspot
