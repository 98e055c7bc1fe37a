#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "emptyspot/error.hpp"
#include "emptyspot/interaction.hpp"

namespace emptyspot {

// F(n): number of baskets containing n.
struct FrequencyTable {
  std::vector<std::size_t> counts;
  std::size_t dataset_size = 0;

  std::size_t operator[](NodeId v) const { return v < counts.size() ? counts[v] : 0; }
};

inline FrequencyTable frequency(const Dataset& d) {
  FrequencyTable f;
  f.counts.assign(d.node_universe, 0);
  f.dataset_size = d.size();
  for (const auto& b : d.baskets) {
    for (NodeId v : b.members) ++f.counts[v];
  }
  return f;
}

// Jaccard coefficient between the basket sets of i and j; 0 when neither
// node occurs.
inline double jaccard(const Dataset& d, NodeId i, NodeId j) {
  std::size_t both = 0, either = 0;
  for (const auto& b : d.baskets) {
    const bool has_i = b.contains(i);
    const bool has_j = b.contains(j);
    both += (has_i && has_j) ? 1 : 0;
    either += (has_i || has_j) ? 1 : 0;
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

// Dense symmetric Jaccard matrix over the nodes that occur in the dataset
// (ascending id order).
class ClosenessMatrix {
 public:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  ClosenessMatrix() = default;
  ClosenessMatrix(std::vector<NodeId> node_ids, std::size_t node_universe)
      : node_ids_(std::move(node_ids)),
        row_of_(node_universe, kAbsent),
        values_(node_ids_.size() * node_ids_.size(), 0.0) {
    for (std::size_t r = 0; r < node_ids_.size(); ++r) row_of_[node_ids_[r]] = r;
  }

  std::size_t dimension() const { return node_ids_.size(); }
  const std::vector<NodeId>& node_ids() const { return node_ids_; }
  NodeId node_at(std::size_t row) const { return node_ids_[row]; }

  // Row of `v`, or kAbsent when v never occurs.
  std::size_t row_of(NodeId v) const { return v < row_of_.size() ? row_of_[v] : kAbsent; }

  double at(std::size_t r, std::size_t c) const { return values_[r * dimension() + c]; }
  void set(std::size_t r, std::size_t c, double value) {
    values_[r * dimension() + c] = value;
    values_[c * dimension() + r] = value;
  }

 private:
  std::vector<NodeId> node_ids_;
  std::vector<std::size_t> row_of_;
  std::vector<double> values_;
};

inline ClosenessMatrix closeness_matrix(const Dataset& d) {
  const FrequencyTable f = frequency(d);
  std::vector<NodeId> present;
  for (NodeId v = 0; v < d.node_universe; ++v) {
    if (f.counts[v] > 0) present.push_back(v);
  }
  if (present.empty()) throw StructuralError("closeness_matrix: every basket is empty");

  ClosenessMatrix m(present, d.node_universe);
  const std::size_t dim = present.size();
  const std::size_t words = (d.size() + 63) / 64;
  // Basket-incidence bitset per matrix row.
  std::vector<std::uint64_t> incidence(dim * words, 0);
  for (const auto& b : d.baskets) {
    for (NodeId v : b.members) {
      incidence[m.row_of(v) * words + b.index / 64] |= std::uint64_t{1} << (b.index % 64);
    }
  }
  for (std::size_t r = 0; r < dim; ++r) {
    const std::uint64_t* a = &incidence[r * words];
    for (std::size_t c = r; c < dim; ++c) {
      const std::uint64_t* b = &incidence[c * words];
      std::size_t both = 0, either = 0;
      for (std::size_t w = 0; w < words; ++w) {
        both += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        either += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
      }
      m.set(r, c, static_cast<double>(both) / static_cast<double>(either));
    }
  }
  return m;
}

}  // namespace emptyspot
