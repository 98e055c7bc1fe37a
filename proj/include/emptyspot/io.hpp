#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emptyspot/clustering.hpp"
#include "emptyspot/error.hpp"
#include "emptyspot/evaluation.hpp"
#include "emptyspot/graph.hpp"
#include "emptyspot/interaction.hpp"
#include "emptyspot/predictor.hpp"

// Text codecs for every artifact. Savers write the canonical form (sorted,
// stable); loaders accept it and report malformed input as ParseError with
// the 1-based line number.
namespace emptyspot::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, const std::string& source, std::size_t line, std::string_view what) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(source, line, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, const std::string& source, std::size_t line,
                          std::string_view what) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    out.push_back(parse_number<T>(text.substr(start, comma - start), source, line, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
void require_ascending(const std::vector<T>& v, const std::string& source, std::size_t line) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] >= v[i]) throw ParseError(source, line, "ids must be strictly ascending");
  }
}

template <typename T>
void write_list(std::ostream& os, const std::vector<T>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
}

// Reads `#nodes <n>` from the first line.
inline std::size_t read_node_header(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(source, 1, "missing '#nodes <n>' header");
  std::string_view s = trim(line);
  constexpr std::string_view kPrefix = "#nodes";
  if (s.substr(0, kPrefix.size()) != kPrefix) throw ParseError(source, 1, "expected '#nodes <n>' header");
  return parse_number<std::size_t>(s.substr(kPrefix.size()), source, 1, "node count");
}

}  // namespace detail

// Shortest decimal form that survives 12 significant digits.
inline std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// --- graph -----------------------------------------------------------------

inline void save_graph(std::ostream& os, const Graph& g) {
  os << "#nodes " << g.node_count() << '\n';
  for (auto [i, j] : g.edges()) os << i << '\t' << j << '\n';
}

inline Graph load_graph(std::istream& is, const std::string& source = "<graph>") {
  const std::size_t n = detail::read_node_header(is, source);
  if (n == 0) throw ParseError(source, 1, "node count must be positive");
  Graph g(n);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    const std::size_t tab = s.find_first_of("\t ");
    if (tab == std::string_view::npos) throw ParseError(source, lineno, "expected '<i>\\t<j>'");
    const auto i = detail::parse_number<NodeId>(s.substr(0, tab), source, lineno, "node id");
    const auto j = detail::parse_number<NodeId>(s.substr(tab + 1), source, lineno, "node id");
    if (i >= n || j >= n) throw ParseError(source, lineno, "node id out of range");
    if (i == j) throw ParseError(source, lineno, "self-loop");
    if (!g.add_edge(i, j)) throw ParseError(source, lineno, "duplicate edge");
  }
  return g;
}

// --- dataset ---------------------------------------------------------------

inline void save_dataset(std::ostream& os, const Dataset& d) {
  os << "#nodes " << d.node_universe << '\n';
  for (const auto& b : d.baskets) {
    os << b.index << ':';
    detail::write_list(os, b.members);
    os << '\n';
  }
}

inline Dataset load_dataset(std::istream& is, const std::string& source = "<dataset>") {
  Dataset d;
  d.node_universe = detail::read_node_header(is, source);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    const std::size_t colon = s.find(':');
    if (colon == std::string_view::npos) throw ParseError(source, lineno, "expected '<index>:<ids>'");
    Basket b;
    b.index = detail::parse_number<BasketIndex>(s.substr(0, colon), source, lineno, "basket index");
    if (b.index != d.baskets.size()) {
      throw ParseError(source, lineno, "basket index " + std::to_string(b.index) + " out of sequence");
    }
    b.members = detail::parse_list<NodeId>(s.substr(colon + 1), source, lineno, "node id");
    detail::require_ascending(b.members, source, lineno);
    if (!b.members.empty() && b.members.back() >= d.node_universe) {
      throw ParseError(source, lineno, "node id outside node universe");
    }
    d.baskets.push_back(std::move(b));
  }
  if (d.baskets.empty()) throw ParseError(source, lineno, "dataset has no baskets");
  return d;
}

// --- truth -----------------------------------------------------------------

inline void save_truth(std::ostream& os, const HiddenTruth& t) {
  os << "hidden=";
  detail::write_list(os, t.hidden_nodes);
  os << "\nmodified=";
  detail::write_list(os, t.modified_baskets);
  os << "\ngateways=";
  detail::write_list(os, t.gateway_nodes);
  os << '\n';
}

inline HiddenTruth load_truth(std::istream& is, const std::string& source = "<truth>") {
  HiddenTruth t;
  constexpr std::string_view kKeys[] = {"hidden", "modified", "gateways"};
  std::string line;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t lineno = k + 1;
    if (!std::getline(is, line)) throw ParseError(source, lineno, "expected '" + std::string(kKeys[k]) + "=...'");
    std::string_view s = detail::trim(line);
    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos || detail::trim(s.substr(0, eq)) != kKeys[k]) {
      throw ParseError(source, lineno, "expected '" + std::string(kKeys[k]) + "=...'");
    }
    const auto body = s.substr(eq + 1);
    if (k == 1) {
      t.modified_baskets = detail::parse_list<BasketIndex>(body, source, lineno, "basket index");
      detail::require_ascending(t.modified_baskets, source, lineno);
    } else {
      auto ids = detail::parse_list<NodeId>(body, source, lineno, "node id");
      detail::require_ascending(ids, source, lineno);
      (k == 0 ? t.hidden_nodes : t.gateway_nodes) = std::move(ids);
    }
  }
  return t;
}

// --- clustering ------------------------------------------------------------

inline void save_clustering(std::ostream& os, const Clustering& cl) {
  for (std::size_t j = 0; j < cl.num_clusters; ++j) {
    os << j << ':' << cl.medoids[j] << '|';
    detail::write_list(os, cl.members(j));
    os << '\n';
  }
}

// Iteration counts and objective traces are not part of the dump.
inline Clustering load_clustering(std::istream& is, const std::string& source = "<clustering>") {
  Clustering cl;
  std::vector<std::pair<NodeId, std::size_t>> membership;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    const std::size_t colon = s.find(':');
    const std::size_t bar = s.find('|');
    if (colon == std::string_view::npos || bar == std::string_view::npos || bar < colon) {
      throw ParseError(source, lineno, "expected '<cluster>:<medoid>|<ids>'");
    }
    const auto index = detail::parse_number<std::size_t>(s.substr(0, colon), source, lineno, "cluster index");
    if (index != cl.medoids.size()) throw ParseError(source, lineno, "cluster index out of sequence");
    const auto medoid = detail::parse_number<NodeId>(s.substr(colon + 1, bar - colon - 1), source, lineno, "medoid");
    auto members = detail::parse_list<NodeId>(s.substr(bar + 1), source, lineno, "node id");
    detail::require_ascending(members, source, lineno);
    if (!std::binary_search(members.begin(), members.end(), medoid)) {
      throw ParseError(source, lineno, "medoid is not a member of its cluster");
    }
    cl.medoids.push_back(medoid);
    for (NodeId v : members) membership.emplace_back(v, index);
  }
  if (cl.medoids.empty()) throw ParseError(source, lineno, "clustering has no clusters");
  std::sort(membership.begin(), membership.end());
  for (std::size_t i = 0; i < membership.size(); ++i) {
    if (i > 0 && membership[i - 1].first == membership[i].first) {
      throw ParseError(source, lineno, "node " + std::to_string(membership[i].first) + " in two clusters");
    }
    cl.node_ids.push_back(membership[i].first);
    cl.assignment.push_back(membership[i].second);
  }
  cl.num_clusters = cl.medoids.size();
  return cl;
}

// --- ranking ---------------------------------------------------------------

inline void save_ranking(std::ostream& os, const RankedBaskets& r) {
  os << "rank,basket_index,score\n";
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    os << (k + 1) << ',' << r.order[k] << ',' << format_score(r.scores[r.order[k]]) << '\n';
  }
}

inline RankedBaskets load_ranking(std::istream& is, const std::string& source = "<ranking>") {
  std::string line;
  if (!std::getline(is, line) || detail::trim(line) != "rank,basket_index,score") {
    throw ParseError(source, 1, "expected header 'rank,basket_index,score'");
  }
  RankedBaskets r;
  std::vector<double> by_rank;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    const std::size_t c1 = s.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(source, lineno, "expected 'rank,basket_index,score'");
    const auto rank = detail::parse_number<std::size_t>(s.substr(0, c1), source, lineno, "rank");
    if (rank != r.order.size() + 1) throw ParseError(source, lineno, "rank out of sequence");
    r.order.push_back(detail::parse_number<BasketIndex>(s.substr(c1 + 1, c2 - c1 - 1), source, lineno, "basket index"));
    by_rank.push_back(detail::parse_number<double>(s.substr(c2 + 1), source, lineno, "score"));
  }
  r.scores.assign(r.order.size(), 0.0);
  std::vector<char> seen(r.order.size(), 0);
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    if (r.order[k] >= r.order.size() || seen[r.order[k]]) {
      throw ParseError(source, k + 2, "basket indices are not a permutation");
    }
    seen[r.order[k]] = 1;
    r.scores[r.order[k]] = by_rank[k];
  }
  return r;
}

// --- precision -------------------------------------------------------------

// One row per m_ret. A single curve is written with mean = min = max.
struct PrecisionTable {
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;

  static PrecisionTable from_curve(const PrecisionCurve& c) { return {c.values, c.values, c.values}; }
  static PrecisionTable from_trial(const TrialResult& t) { return {t.mean_curve, t.min_curve, t.max_curve}; }

  friend bool operator==(const PrecisionTable&, const PrecisionTable&) = default;
};

inline void save_precision(std::ostream& os, const PrecisionTable& t) {
  os << "m_ret,mean_p,min_p,max_p\n";
  for (std::size_t m = 0; m < t.mean.size(); ++m) {
    os << (m + 1) << ',' << format_score(t.mean[m]) << ',' << format_score(t.min[m]) << ','
       << format_score(t.max[m]) << '\n';
  }
}

inline PrecisionTable load_precision(std::istream& is, const std::string& source = "<precision>") {
  std::string line;
  if (!std::getline(is, line) || detail::trim(line) != "m_ret,mean_p,min_p,max_p") {
    throw ParseError(source, 1, "expected header 'm_ret,mean_p,min_p,max_p'");
  }
  PrecisionTable t;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    auto fields = detail::parse_list<double>(s, source, lineno, "value");
    if (fields.size() != 4) throw ParseError(source, lineno, "expected 4 columns");
    if (fields[0] != static_cast<double>(t.mean.size() + 1)) throw ParseError(source, lineno, "m_ret out of sequence");
    t.mean.push_back(fields[1]);
    t.min.push_back(fields[2]);
    t.max.push_back(fields[3]);
  }
  return t;
}

// --- closeness matrix (debug dump) ----------------------------------------

inline void save_closeness_csv(std::ostream& os, const ClosenessMatrix& m) {
  os << "node";
  for (NodeId v : m.node_ids()) os << ',' << v;
  os << '\n';
  for (std::size_t r = 0; r < m.dimension(); ++r) {
    os << m.node_at(r);
    for (std::size_t c = 0; c < m.dimension(); ++c) os << ',' << format_score(m.at(r, c));
    os << '\n';
  }
}

// --- file helpers ----------------------------------------------------------

template <typename Loader>
auto load_file(const std::filesystem::path& path, Loader&& loader) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return loader(in, path.string());
}

template <typename Saver>
void save_file(const std::filesystem::path& path, Saver&& saver) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string(), 0, "cannot open file for writing");
  saver(out);
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

template <typename Saver>
std::string to_text(Saver&& saver) {
  std::ostringstream os;
  saver(os);
  return os.str();
}

}  // namespace emptyspot::io
