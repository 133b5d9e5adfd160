#pragma once

// Vertex orders whose prefix is the source set: min-weighted-degree peeling
// and the BFS / degree / PageRank baselines.

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <string_view>
#include <utility>
#include <vector>

#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"
#include "nestseg/weighting.hpp"

namespace nestseg {

/// A permutation of the vertices whose first `source_size` entries are S.
struct VertexOrder {
  std::vector<VertexId> sequence;
  std::size_t source_size = 0;

  std::size_t size() const noexcept { return sequence.size(); }

  /// position[v] = index of v in `sequence`.
  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> pos(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i) pos[sequence[i]] = i;
    return pos;
  }

  VertexSet prefix(std::size_t count) const {
    return VertexSet(std::vector<VertexId>(sequence.begin(), sequence.begin() + static_cast<std::ptrdiff_t>(count)));
  }

  VertexSet range(std::size_t first, std::size_t last) const {
    return VertexSet(std::vector<VertexId>(sequence.begin() + static_cast<std::ptrdiff_t>(first),
                                           sequence.begin() + static_cast<std::ptrdiff_t>(last)));
  }

  /// Throws Error unless this is a permutation of [0, n) with S as prefix.
  void validate(std::size_t n, const VertexSet* sources = nullptr) const {
    if (sequence.size() != n) throw Error("vertex order does not cover the graph");
    if (source_size > n) throw Error("source prefix longer than the order");
    std::vector<char> seen(n, 0);
    for (VertexId v : sequence) {
      if (v >= n || seen[v]) throw Error("vertex order is not a permutation");
      seen[v] = 1;
    }
    if (sources) {
      if (sources->size() != source_size) throw Error("source prefix size mismatch");
      for (std::size_t i = 0; i < source_size; ++i)
        if (!sources->contains(sequence[i])) throw Error("order prefix differs from the source set");
    }
  }

  friend bool operator==(const VertexOrder&, const VertexOrder&) = default;
};

enum class OrderKind { peel, degree, pagerank, hops };

inline std::string_view to_string(OrderKind k) {
  switch (k) {
    case OrderKind::peel:
      return "peel";
    case OrderKind::degree:
      return "degree";
    case OrderKind::pagerank:
      return "pagerank";
    case OrderKind::hops:
      return "hops";
  }
  return "?";
}

inline std::optional<OrderKind> parse_order_kind(std::string_view s) {
  for (auto k : {OrderKind::peel, OrderKind::degree, OrderKind::pagerank, OrderKind::hops})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace detail {

inline void check_sources(const Graph& g, const VertexSet& sources) {
  for (VertexId s : sources)
    if (s >= g.num_vertices()) throw Error("source vertex out of range");
}

// S ascending, then the rest by descending score, ties by ascending id.
inline VertexOrder order_by_score(const Graph& g, const VertexSet& sources, const std::vector<double>& score) {
  check_sources(g, sources);
  VertexOrder order;
  order.source_size = sources.size();
  order.sequence.assign(sources.begin(), sources.end());
  std::vector<VertexId> rest;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (!sources.contains(v)) rest.push_back(v);
  std::stable_sort(rest.begin(), rest.end(), [&](VertexId a, VertexId b) { return score[a] > score[b]; });
  order.sequence.insert(order.sequence.end(), rest.begin(), rest.end());
  return order;
}

}  // namespace detail

/// Peels V \ S by repeatedly removing the vertex of least remaining weighted
/// degree (ties: lowest id). The last vertex removed comes right after S,
/// the first one removed is last in the order.
///
/// Every remaining vertex shares the completed denominator |W ∪ S| - 1, so
/// argmin of d(x, W ∪ S) is argmin of the remaining weighted degree.
inline VertexOrder sort_vertices(const Graph& g, const VertexSet& sources) {
  detail::check_sources(g, sources);
  const std::size_t n = g.num_vertices();
  const auto is_source = sources.mask(n);

  std::vector<double> remaining(n, 0.0);
  std::vector<char> removed(n, 0);
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (VertexId v = 0; v < n; ++v) {
    remaining[v] = g.weighted_degree(v);
    if (!is_source[v]) heap.emplace(remaining[v], v);
  }

  std::vector<VertexId> removal;
  removal.reserve(n - sources.size());
  while (!heap.empty()) {
    const auto [key, x] = heap.top();
    heap.pop();
    if (removed[x] || key != remaining[x]) continue;  // stale entry
    removed[x] = 1;
    removal.push_back(x);
    for (const auto& nb : g.neighbors(x)) {
      const VertexId y = nb.vertex;
      if (removed[y] || nb.weight == 0.0) continue;
      remaining[y] -= nb.weight;
      if (!is_source[y]) heap.emplace(remaining[y], y);
    }
  }

  VertexOrder order;
  order.source_size = sources.size();
  order.sequence.assign(sources.begin(), sources.end());
  order.sequence.insert(order.sequence.end(), removal.rbegin(), removal.rend());
  return order;
}

struct DensePrefix {
  VertexSet vertices;
  double density = 0.0;  ///< w(E(prefix)) / |prefix|
};

/// Prefix {v_1..v_i}, i >= 1, of maximum average-degree density; the
/// shortest one on ties.
inline DensePrefix densest_prefix(const Graph& g, const VertexOrder& order) {
  if (order.size() == 0) throw Error("densest prefix of an empty order");
  const auto pos = order.positions();
  double weight = 0.0;
  double best = -1.0;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId v = order.sequence[i];
    for (const auto& nb : g.neighbors(v))
      if (pos[nb.vertex] < i) weight += nb.weight;
    const double density = weight / static_cast<double>(i + 1);
    if (density > best) {
      best = density;
      best_len = i + 1;
    }
  }
  return {order.prefix(best_len), best};
}

/// BFS level sets from S: L_0 = S, L_1, ... Vertices unreachable from S form
/// one trailing level.
inline std::vector<VertexSet> hops_levels(const Graph& g, const VertexSet& sources) {
  if (sources.empty()) throw Error("hop levels need a non-empty source set");
  detail::check_sources(g, sources);
  const std::size_t n = g.num_vertices();
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(n, unseen);
  std::vector<VertexId> frontier(sources.begin(), sources.end());
  for (VertexId s : sources) level[s] = 0;
  std::vector<VertexSet> levels{sources};
  std::size_t reached = sources.size();
  while (true) {
    std::vector<VertexId> next;
    for (VertexId u : frontier)
      for (const auto& nb : g.neighbors(u))
        if (level[nb.vertex] == unseen) {
          level[nb.vertex] = levels.size();
          next.push_back(nb.vertex);
        }
    if (next.empty()) break;
    reached += next.size();
    levels.emplace_back(next);
    frontier = std::move(next);
  }
  if (reached < n) {
    std::vector<VertexId> rest;
    for (VertexId v = 0; v < n; ++v)
      if (level[v] == unseen) rest.push_back(v);
    levels.emplace_back(std::move(rest));
  }
  return levels;
}

/// The hop levels flattened into an order, plus the breakpoints b_0..b_m of
/// the nested sequence V_i = L_0 ∪ ... ∪ L_i.
struct HopsSequence {
  VertexOrder order;
  std::vector<std::size_t> breakpoints;
};

inline HopsSequence hops_sequence(const Graph& g, const VertexSet& sources) {
  const auto levels = hops_levels(g, sources);
  HopsSequence out;
  out.order.source_size = sources.size();
  for (const auto& level : levels) {
    out.order.sequence.insert(out.order.sequence.end(), level.begin(), level.end());
    out.breakpoints.push_back(out.order.sequence.size());
  }
  return out;
}

/// S, then the rest by descending weighted degree.
inline VertexOrder degree_order(const Graph& g, const VertexSet& sources) {
  std::vector<double> score(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) score[v] = g.weighted_degree(v);
  return detail::order_by_score(g, sources, score);
}

/// S, then the rest by descending PageRank.
inline VertexOrder pagerank_order(const Graph& g, const VertexSet& sources, const PageRankVector& pr) {
  if (pr.p.size() != g.num_vertices()) throw Error("PageRank vector does not match the graph");
  return detail::order_by_score(g, sources, pr.p);
}

}  // namespace nestseg
