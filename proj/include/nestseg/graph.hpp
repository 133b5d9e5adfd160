#pragma once

// Weighted undirected simple graph and density algebra over its completed
// representation: every unordered vertex pair is a slot, non-edges are
// zero-weight slots that are counted but never stored.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nestseg/error.hpp"

namespace nestseg {

using VertexId = std::uint32_t;

struct Neighbor {
  VertexId vertex;
  double weight;
};

class Graph {
 public:
  Graph() = default;

  std::size_t num_vertices() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const Neighbor> neighbors(VertexId v) const { return adjacency_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
  double weighted_degree(VertexId v) const {
    double total = 0.0;
    for (const auto& nb : adjacency_[v]) total += nb.weight;
    return total;
  }

  const std::string& label(VertexId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<VertexId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Weight of edge {u, v}, or 0 for a non-edge.
  double weight(VertexId u, VertexId v) const {
    if (adjacency_[u].size() > adjacency_[v].size()) std::swap(u, v);
    for (const auto& nb : adjacency_[u])
      if (nb.vertex == v) return nb.weight;
    return 0.0;
  }

  double max_weight() const {
    double best = 0.0;
    for (const auto& list : adjacency_)
      for (const auto& nb : list) best = std::max(best, nb.weight);
    return best;
  }

  /// Calls fn(u, v, w) once per edge with u < v.
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (VertexId u = 0; u < adjacency_.size(); ++u)
      for (const auto& nb : adjacency_[u])
        if (u < nb.vertex) fn(u, nb.vertex, nb.weight);
  }

  /// Same edge set with every weight replaced by fn(u, v, old_weight), u < v.
  /// fn must be deterministic: it is called once per direction with the
  /// same arguments.
  template <typename Fn>
  Graph reweighted(Fn&& fn) const {
    Graph out = *this;
    for (VertexId u = 0; u < out.adjacency_.size(); ++u)
      for (auto& nb : out.adjacency_[u])
        nb.weight = fn(std::min(u, nb.vertex), std::max(u, nb.vertex), nb.weight);
    return out;
  }

 private:
  friend class GraphBuilder;

  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
  std::size_t num_edges_ = 0;
};

enum class DuplicatePolicy { reject, sum };

/// Incremental construction with label interning in first-appearance order.
class GraphBuilder {
 public:
  explicit GraphBuilder(DuplicatePolicy policy = DuplicatePolicy::reject) : policy_(policy) {}

  VertexId add_vertex(std::string_view label) {
    std::string key(label);
    auto [it, inserted] = graph_.index_.try_emplace(key, static_cast<VertexId>(graph_.labels_.size()));
    if (inserted) {
      graph_.labels_.push_back(std::move(key));
      graph_.adjacency_.emplace_back();
    }
    return it->second;
  }

  /// Throws Error on self-loops, negative or non-finite weights and, under
  /// DuplicatePolicy::reject, on repeated pairs.
  void add_edge(VertexId u, VertexId v, double w) {
    if (u == v) throw Error("self-loop on vertex '" + graph_.labels_[u] + "'");
    if (!std::isfinite(w)) throw Error("non-finite edge weight");
    if (w < 0.0) throw Error("negative edge weight");
    const auto key = pair_key(u, v);
    if (!slot_.insert(key).second) {
      if (policy_ == DuplicatePolicy::reject)
        throw Error("duplicate edge (" + graph_.labels_[u] + ", " + graph_.labels_[v] + ")");
      for (auto& nb : graph_.adjacency_[u])
        if (nb.vertex == v) nb.weight += w;
      for (auto& nb : graph_.adjacency_[v])
        if (nb.vertex == u) nb.weight += w;
      return;
    }
    graph_.adjacency_[u].push_back({v, w});
    graph_.adjacency_[v].push_back({u, w});
    ++graph_.num_edges_;
  }

  void add_edge(std::string_view a, std::string_view b, double w = 1.0) {
    const VertexId u = add_vertex(a);
    const VertexId v = add_vertex(b);
    add_edge(u, v, w);
  }

  Graph build() && {
    slot_.clear();
    return std::move(graph_);
  }

 private:
  static std::uint64_t pair_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  DuplicatePolicy policy_;
  Graph graph_;
  std::unordered_set<std::uint64_t> slot_;
};

/// Builds a graph on vertices labelled "0".."n-1" from (u, v, w) triples.
inline Graph make_graph(std::size_t n, std::initializer_list<std::tuple<VertexId, VertexId, double>> edges) {
  GraphBuilder builder;
  for (std::size_t i = 0; i < n; ++i) builder.add_vertex(std::to_string(i));
  for (const auto& [u, v, w] : edges) builder.add_edge(u, v, w);
  return std::move(builder).build();
}

/// Parses a whitespace-separated edge list: `u v [weight]` per line, weight
/// defaulting to 1. Blank lines and lines starting with `#` are skipped.
inline Graph load_edge_list(std::istream& in, DuplicatePolicy policy = DuplicatePolicy::reject) {
  GraphBuilder builder(policy);
  std::string line;
  std::size_t line_no = 0;
  std::unordered_map<std::uint64_t, std::size_t> first_line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::vector<std::string_view> tokens;
    while (true) {
      const auto start = rest.find_first_not_of(" \t\r\f\v");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const auto end = rest.find_first_of(" \t\r\f\v");
      tokens.push_back(rest.substr(0, end));
      if (end == std::string_view::npos) break;
      rest.remove_prefix(end);
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() < 2 || tokens.size() > 3)
      throw ParseError(line_no, "expected 'u v [weight]', got " + std::to_string(tokens.size()) + " fields");

    double w = 1.0;
    if (tokens.size() == 3) {
      const auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "unparsable weight '" + std::string(tok) + "'");
    }
    if (tokens[0] == tokens[1]) throw ParseError(line_no, "self-loop on vertex '" + std::string(tokens[0]) + "'");
    const VertexId u = builder.add_vertex(tokens[0]);
    const VertexId v = builder.add_vertex(tokens[1]);
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    if (auto [it, inserted] = first_line.try_emplace(key, line_no); !inserted && policy == DuplicatePolicy::reject)
      throw ParseError(line_no, "duplicate edge (" + std::string(tokens[0]) + ", " + std::string(tokens[1]) +
                                    "), first seen on line " + std::to_string(it->second));
    try {
      builder.add_edge(u, v, w);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return std::move(builder).build();
}

/// A set of vertex ids, kept sorted and duplicate-free.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<VertexId> ids) : ids_(ids) { normalize(); }
  explicit VertexSet(std::vector<VertexId> ids) : ids_(std::move(ids)) { normalize(); }

  static VertexSet from_mask(std::uint64_t mask) {
    std::vector<VertexId> ids;
    for (VertexId v = 0; mask; ++v, mask >>= 1)
      if (mask & 1U) ids.push_back(v);
    return VertexSet(std::move(ids));
  }

  static VertexSet all(std::size_t n) {
    std::vector<VertexId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<VertexId>(i);
    return VertexSet(std::move(ids));
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(VertexId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  std::span<const VertexId> ids() const noexcept { return ids_; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  std::vector<char> mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (VertexId v : ids_) m[v] = 1;
    return m;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<VertexId> ids_;
};

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<VertexId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

inline std::size_t intersection_size(const VertexSet& a, const VertexSet& b) {
  std::size_t c = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++c, ++i, ++j;
    }
  }
  return c;
}

/// |N(S, T)|: unordered pairs {x, y}, x != y, with x in S and y in T.
inline std::size_t cross_pair_count(const VertexSet& s, const VertexSet& t) {
  const std::size_t c = intersection_size(s, t);
  return s.size() * t.size() - c * (c + 1) / 2;
}

/// w(S, T): total weight of actual edges crossing S and T, each pair once.
inline double cross_weight(const Graph& g, const VertexSet& s, const VertexSet& t) {
  const VertexSet& small = s.size() <= t.size() ? s : t;
  const VertexSet& large = s.size() <= t.size() ? t : s;
  const auto in_small = small.mask(g.num_vertices());
  const auto in_large = large.mask(g.num_vertices());
  double total = 0.0;
  for (VertexId x : small) {
    for (const auto& nb : g.neighbors(x)) {
      const VertexId y = nb.vertex;
      if (!in_large[y]) continue;
      // {x, y} is reached twice when both ends lie in both sets.
      if (in_small[y] && in_large[x] && y < x) continue;
      total += nb.weight;
    }
  }
  return total;
}

inline double cross_density(const Graph& g, const VertexSet& s, const VertexSet& t) {
  const std::size_t pairs = cross_pair_count(s, t);
  if (pairs == 0) throw Error("empty edge set has no density");
  return cross_weight(g, s, t) / static_cast<double>(pairs);
}

/// Mean weight over the C(|V'|, 2) completed slots of the induced subgraph.
inline double induced_density(const Graph& g, const VertexSet& vs) {
  if (vs.size() < 2) throw Error("induced density needs at least two vertices");
  return cross_density(g, vs, vs);
}

/// w(E(V')) / |V'|.
inline double avg_degree_density(const Graph& g, const VertexSet& vs) {
  if (vs.empty()) throw Error("average-degree density of an empty vertex set");
  return cross_weight(g, vs, vs) / static_cast<double>(vs.size());
}

}  // namespace nestseg
