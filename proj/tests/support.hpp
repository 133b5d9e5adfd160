#pragma once

// Naive reference computations for the unit tests: explicit pair lists, no
// bitmasks, no prefix sums.

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "nestseg/graph.hpp"
#include "nestseg/ordering.hpp"

namespace testing_support {

using nestseg::Graph;
using nestseg::VertexId;
using nestseg::VertexSet;

using Pair = std::pair<VertexId, VertexId>;

inline Pair ordered(VertexId a, VertexId b) { return a < b ? Pair{a, b} : Pair{b, a}; }

/// All unordered pairs {x, y}, x != y, x in s, y in t.
inline std::set<Pair> cross_pairs(const VertexSet& s, const VertexSet& t) {
  std::set<Pair> out;
  for (VertexId x : s)
    for (VertexId y : t)
      if (x != y) out.insert(ordered(x, y));
  return out;
}

inline double slot(const Graph& g, Pair p) { return g.weight(p.first, p.second); }

inline double naive_weight(const Graph& g, const VertexSet& s, const VertexSet& t) {
  double w = 0.0;
  for (const auto& p : cross_pairs(s, t)) w += slot(g, p);
  return w;
}

/// Uniformity score of slots in pairs(outer) \ pairs(inner).
inline double naive_segment_score(const Graph& g, const VertexSet& inner, const VertexSet& outer) {
  std::vector<double> slots;
  const auto old_pairs = cross_pairs(inner, inner);
  for (const auto& p : cross_pairs(outer, outer))
    if (!old_pairs.count(p)) slots.push_back(slot(g, p));
  double mean = 0.0;
  for (double w : slots) mean += w;
  mean /= static_cast<double>(slots.size());
  double sse = 0.0;
  for (double w : slots) sse += (w - mean) * (w - mean);
  return sse;
}

/// Slot-by-slot score of the nested prefixes of `order` cut at `breakpoints`.
inline double naive_sequence_score(const Graph& g, const nestseg::VertexOrder& order,
                                   const std::vector<std::size_t>& breakpoints) {
  double total = 0.0;
  for (std::size_t j = 1; j < breakpoints.size(); ++j)
    total += naive_segment_score(g, order.prefix(breakpoints[j - 1]), order.prefix(breakpoints[j]));
  return total;
}

/// A random permutation with `sources` (ascending) as prefix.
template <typename Rng>
nestseg::VertexOrder random_order(Rng& rng, std::size_t n, const VertexSet& sources) {
  nestseg::VertexOrder order;
  order.source_size = sources.size();
  order.sequence.assign(sources.begin(), sources.end());
  std::vector<VertexId> rest;
  for (VertexId v = 0; v < n; ++v)
    if (!sources.contains(v)) rest.push_back(v);
  std::shuffle(rest.begin(), rest.end(), rng);
  order.sequence.insert(order.sequence.end(), rest.begin(), rest.end());
  return order;
}

/// Random valid breakpoints |S| = b_0 < b_1 < ... < b_k = n with b_1 >= 2.
template <typename Rng>
std::vector<std::size_t> random_breakpoints(Rng& rng, std::size_t n, std::size_t source_size) {
  const std::size_t lo = std::max<std::size_t>(source_size + 1, 2);
  std::vector<std::size_t> cuts{source_size};
  std::bernoulli_distribution coin(0.4);
  for (std::size_t b = lo; b < n; ++b)
    if (coin(rng)) cuts.push_back(b);
  cuts.push_back(n);
  return cuts;
}

inline Graph path4() { return nestseg::make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}); }

inline Graph complete_graph(std::size_t n, double w = 1.0) {
  nestseg::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex(std::to_string(i));
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) b.add_edge(u, v, w);
  return std::move(b).build();
}

}  // namespace testing_support
