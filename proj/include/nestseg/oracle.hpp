#pragma once

// Exhaustive reference solvers and property validators for toy instances.
// Every routine here enumerates; none of them reuses the PAV / DP / edge-group
// machinery they are meant to check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"
#include "nestseg/ordering.hpp"
#include "nestseg/segmentation.hpp"

namespace nestseg::oracle {

struct OracleBudget {
  std::size_t max_vertices = 8;          ///< chain enumeration
  std::size_t max_subset_vertices = 12;  ///< single-subset enumeration
  std::size_t max_blocks = 12;
  std::size_t max_k = 4;
  std::size_t sample_count = 50;
};

using Mask = std::uint32_t;

/// Adjacency matrix view for bitmask-set arithmetic on small graphs.
class DenseGraph {
 public:
  explicit DenseGraph(const Graph& g) : n_(g.num_vertices()), w_(n_ * n_, 0.0) {
    g.for_each_edge([&](VertexId u, VertexId v, double w) {
      w_[u * n_ + v] = w;
      w_[v * n_ + u] = w;
    });
  }

  std::size_t size() const noexcept { return n_; }
  double slot_weight(std::size_t u, std::size_t v) const { return w_[u * n_ + v]; }
  Mask all() const { return n_ >= 32 ? ~Mask{0} : (Mask{1} << n_) - 1; }

  /// Number of unordered pairs {x, y}, x != y, x in a, y in b.
  static std::size_t pairs(Mask a, Mask b) {
    const std::size_t c = static_cast<std::size_t>(std::popcount(a & b));
    return static_cast<std::size_t>(std::popcount(a)) * static_cast<std::size_t>(std::popcount(b)) - c * (c + 1) / 2;
  }

  /// Total completed-slot weight over the same pairs, by enumeration.
  double weight(Mask a, Mask b) const {
    double total = 0.0;
    for (std::size_t x = 0; x < n_; ++x) {
      if (!(a >> x & 1U)) continue;
      for (std::size_t y = 0; y < n_; ++y) {
        if (y == x || !(b >> y & 1U)) continue;
        if ((a >> y & 1U) && (b >> x & 1U) && y < x) continue;
        total += slot_weight(x, y);
      }
    }
    return total;
  }

  double density(Mask a, Mask b) const { return weight(a, b) / static_cast<double>(pairs(a, b)); }

  /// Uniformity score of the slots inside `outer` but not inside `inner`.
  double segment_score(Mask inner, Mask outer) const {
    std::vector<double> slots;
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = x + 1; y < n_; ++y) {
        const bool in_outer = (outer >> x & 1U) && (outer >> y & 1U);
        const bool in_inner = (inner >> x & 1U) && (inner >> y & 1U);
        if (in_outer && !in_inner) slots.push_back(slot_weight(x, y));
      }
    double mean = 0.0;
    for (double w : slots) mean += w;
    mean /= static_cast<double>(slots.size());
    double sse = 0.0;
    for (double w : slots) sse += (w - mean) * (w - mean);
    return sse;
  }

 private:
  std::size_t n_;
  std::vector<double> w_;
};

inline Mask to_mask(const VertexSet& s) {
  Mask m = 0;
  for (VertexId v : s) m |= Mask{1} << v;
  return m;
}

// ---------------------------------------------------------------------------
// Sequence oracles

struct AntitonicFit {
  std::vector<double> fitted;
  double sse = 0.0;
};

/// Best non-increasing fit among all partitions into consecutive runs, each
/// run fitted by its weighted mean.
inline AntitonicFit brute_force_antitonic_fit(std::span<const WeightedPoint> points, const OracleBudget& budget = {}) {
  const std::size_t n = points.size();
  if (n > budget.max_blocks) throw BudgetError("antitonic fit oracle limited to " + std::to_string(budget.max_blocks) + " points");
  AntitonicFit best;
  best.sse = std::numeric_limits<double>::infinity();
  if (n == 0) return {{}, 0.0};
  for (Mask cuts = 0; cuts < (Mask{1} << (n - 1)); ++cuts) {
    std::vector<double> fit(n);
    std::vector<double> run_means;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool end_here = i == n - 1 || (cuts >> i & 1U);
      if (!end_here) continue;
      double w = 0.0;
      double s = 0.0;
      for (std::size_t t = start; t <= i; ++t) {
        w += points[t].weight;
        s += points[t].weight * points[t].value;
      }
      for (std::size_t t = start; t <= i; ++t) fit[t] = s / w;
      run_means.push_back(s / w);
      start = i + 1;
    }
    bool antitonic = true;
    for (std::size_t j = 1; j < run_means.size(); ++j) antitonic &= run_means[j] <= run_means[j - 1];
    if (!antitonic) continue;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += points[i].weight * (points[i].value - fit[i]) * (points[i].value - fit[i]);
    if (sse < best.sse) best = {std::move(fit), sse};
  }
  return best;
}

/// Exhaustive k-segmentation of `points` with strictly decreasing segment
/// centroids, all below `centroid_bound`. Breakpoints index points
/// (0 = c_0 < ... < c_k = n). nullopt when no segmentation qualifies.
inline std::optional<Segmentation> brute_force_segmentation(
    std::span<const WeightedPoint> points, std::size_t k,
    double centroid_bound = std::numeric_limits<double>::infinity(), const OracleBudget& budget = {}) {
  const std::size_t n = points.size();
  if (n > budget.max_blocks) throw BudgetError("segmentation oracle limited to " + std::to_string(budget.max_blocks) + " points");
  if (k == 0 || k > n) return std::nullopt;

  std::optional<Segmentation> best;
  std::vector<std::size_t> cuts(k + 1);
  // Enumerate interior cuts in lexicographic order so ties keep the earliest.
  std::vector<std::size_t> idx(k - 1);
  for (std::size_t j = 0; j + 1 < k; ++j) idx[j] = j + 1;
  while (true) {
    cuts[0] = 0;
    for (std::size_t j = 0; j + 1 < k; ++j) cuts[j + 1] = idx[j];
    cuts[k] = n;

    bool feasible = true;
    double cost = 0.0;
    double prev_mu = centroid_bound;
    for (std::size_t j = 1; j <= k && feasible; ++j) {
      double w = 0.0;
      double s = 0.0;
      for (std::size_t i = cuts[j - 1]; i < cuts[j]; ++i) {
        w += points[i].weight;
        s += points[i].weight * points[i].value;
      }
      const double mu = s / w;
      if (!(mu < prev_mu)) feasible = false;
      prev_mu = mu;
      for (std::size_t i = cuts[j - 1]; i < cuts[j]; ++i)
        cost += points[i].weight * (points[i].value - mu) * (points[i].value - mu);
    }
    if (feasible && (!best || cost < best->cost)) best = Segmentation{cuts, cost};

    // Next combination of k - 1 cuts from {1, ..., n - 1}.
    std::size_t j = k - 1;
    while (j > 0 && idx[j - 1] == n - 1 - (k - 1 - j)) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t t = j; t < k - 1; ++t) idx[t] = idx[t - 1] + 1;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Graph oracles

struct NestedChain {
  std::vector<VertexSet> chain;  ///< V_0 = S, ..., V_k = V
  double score = 0.0;
};

/// Score-minimal chain S = V_0 ⊂ V_1 ⊂ ... ⊂ V_k = V (strict inclusions)
/// with d(V_i) < d(V_{i-1}) for i = 2..k. nullopt if no chain qualifies.
inline std::optional<NestedChain> brute_force_nested(const Graph& g, const VertexSet& sources, std::size_t k,
                                                     const OracleBudget& budget = {}) {
  if (g.num_vertices() > budget.max_vertices) throw BudgetError("nested-chain oracle limited to " + std::to_string(budget.max_vertices) + " vertices");
  if (k > budget.max_k) throw BudgetError("nested-chain oracle limited to k = " + std::to_string(budget.max_k));
  if (k == 0) return std::nullopt;
  const DenseGraph dg(g);
  const Mask full = dg.all();
  const Mask s_mask = to_mask(sources);

  std::optional<NestedChain> best;
  std::vector<Mask> chain{s_mask};
  auto induced = [&](Mask m) { return dg.density(m, m); };

  // Depth-first over strictly growing supersets; `free` masks enumerate in
  // increasing order so ties keep the lexicographically smallest chain.
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    const Mask prev = chain.back();
    if (depth == k) {
      if (prev != full) return;
      double score = 0.0;
      for (std::size_t i = 1; i < chain.size(); ++i) score += dg.segment_score(chain[i - 1], chain[i]);
      if (!best || score < best->score) {
        NestedChain out;
        for (Mask m : chain) out.chain.push_back(VertexSet::from_mask(m));
        out.score = score;
        best = std::move(out);
      }
      return;
    }
    const Mask rest = full & ~prev;
    // Non-empty submasks of `rest` in increasing order.
    for (Mask add = (0 - rest) & rest; add != 0; add = add == rest ? 0 : (add - rest) & rest) {
      const Mask next = prev | add;
      if (depth + 1 < k && next == full) continue;
      if (std::popcount(next) < 2) continue;
      if (depth >= 1 && !(induced(next) < induced(prev))) continue;
      chain.push_back(next);
      self(self, depth + 1);
      chain.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

struct PropertyReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double worst_margin = -std::numeric_limits<double>::infinity();  ///< max of lhs - rhs seen

  bool ok() const noexcept { return violations == 0; }

  void record(double lhs, double rhs, double tol) {
    ++checks;
    worst_margin = std::max(worst_margin, lhs - rhs);
    if (lhs > rhs + tol) ++violations;
  }

  void merge(const PropertyReport& o) {
    instances += o.instances;
    checks += o.checks;
    violations += o.violations;
    skipped += o.skipped;
    worst_margin = std::max(worst_margin, o.worst_margin);
  }
};

inline constexpr double kPropertyTol = 1e-12;

/// On a chain, checks d(X, X ∪ V_i) <= d(Y, V_i) for every non-empty
/// X ⊆ V_{i+1} \ V_i and Y ⊆ V_i \ V_{i-1}, 1 <= i <= k-1.
inline PropertyReport check_prop_density(const Graph& g, const NestedChain& nested) {
  PropertyReport report{"density"};
  report.instances = 1;
  const DenseGraph dg(g);
  std::vector<Mask> chain;
  for (const auto& v : nested.chain) chain.push_back(to_mask(v));
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    const Mask outer = chain[i + 1] & ~chain[i];
    const Mask inner = chain[i] & ~chain[i - 1];
    for (Mask x = outer; x; x = (x - 1) & outer) {
      const double dx = dg.density(x, x | chain[i]);
      for (Mask y = inner; y; y = (y - 1) & inner) report.record(dx, dg.density(y, chain[i]), kPropertyTol);
    }
  }
  return report;
}

struct SubsetOptimum {
  VertexSet vertices;
  double density = 0.0;
};

namespace detail {

template <typename Score, typename Better>
std::optional<SubsetOptimum> best_subset(const Graph& g, const OracleBudget& budget, Score&& score, Better&& better) {
  if (g.num_vertices() > budget.max_subset_vertices) throw BudgetError("subset oracle limited to " + std::to_string(budget.max_subset_vertices) + " vertices");
  const DenseGraph dg(g);
  std::optional<Mask> best_mask;
  double best = 0.0;
  for (Mask m = 1; m <= dg.all(); ++m) {
    const auto value = score(dg, m);
    if (!value) continue;
    if (!best_mask || better(*value, best)) {
      best = *value;
      best_mask = m;
    }
    if (m == dg.all()) break;
  }
  if (!best_mask) return std::nullopt;
  return SubsetOptimum{VertexSet::from_mask(*best_mask), best};
}

}  // namespace detail

/// Maximum average-degree density w(E(T)) / |T| over non-empty T.
inline SubsetOptimum brute_force_densest_subgraph(const Graph& g, const OracleBudget& budget = {}) {
  if (g.num_vertices() == 0) throw Error("densest subgraph of an empty graph");
  return *detail::best_subset(
      g, budget,
      [](const DenseGraph& dg, Mask m) -> std::optional<double> {
        return dg.weight(m, m) / static_cast<double>(std::popcount(m));
      },
      [](double a, double b) { return a > b; });
}

/// Non-empty T maximizing d(T, S ∪ T).
inline std::optional<SubsetOptimum> brute_force_dense_superset(const Graph& g, const VertexSet& sources,
                                                               const OracleBudget& budget = {}) {
  const Mask s_mask = to_mask(sources);
  return detail::best_subset(
      g, budget,
      [s_mask](const DenseGraph& dg, Mask t) -> std::optional<double> {
        if (DenseGraph::pairs(t, t | s_mask) == 0) return std::nullopt;
        return dg.density(t, t | s_mask);
      },
      [](double a, double b) { return a > b; });
}

/// Non-empty T minimizing d(T, V).
inline std::optional<SubsetOptimum> brute_force_sparse_nbhd(const Graph& g, const OracleBudget& budget = {}) {
  return detail::best_subset(
      g, budget,
      [](const DenseGraph& dg, Mask t) -> std::optional<double> {
        if (DenseGraph::pairs(t, dg.all()) == 0) return std::nullopt;
        return dg.density(t, dg.all());
      },
      [](double a, double b) { return a < b; });
}

// ---------------------------------------------------------------------------
// Order-quality bounds for the peeling order. Positions are 1-based as in
// v_1..v_n; only b > |S| is meaningful since source vertices are never peeled.

/// Left bound at (b, c): with W = {v_1..v_c} and f = d(v_c, W), every
/// non-empty X ⊆ {v_b..v_c} has f <= 2 d(X, W).
struct LeftBound {
  Mask window = 0;
  Mask candidates = 0;
  double f = 0.0;
};

inline LeftBound left_bound(const DenseGraph& dg, const VertexOrder& order, std::size_t b, std::size_t c) {
  LeftBound lb;
  for (std::size_t i = 0; i < c; ++i) lb.window |= Mask{1} << order.sequence[i];
  for (std::size_t i = b - 1; i < c; ++i) lb.candidates |= Mask{1} << order.sequence[i];
  lb.f = dg.density(Mask{1} << order.sequence[c - 1], lb.window);
  return lb;
}

inline void check_left(const DenseGraph& dg, const LeftBound& lb, Mask x, PropertyReport& report) {
  report.record(lb.f, 2.0 * dg.density(x, lb.window), kPropertyTol);
}

/// Right bound at (b, c): with W = {v_1..v_{b-1}}, U = {v_b..v_c},
/// alpha = max over v in U of w(v, U) / w(v, W) and f = d(v_b, W), every
/// non-empty X ⊆ U has d(X, X ∪ W) <= (1 + alpha)^2 f. `valid` is false when
/// some v has w(v, W) = 0 < w(v, U), so no finite alpha exists.
struct RightBound {
  Mask prefix = 0;
  Mask candidates = 0;
  double f = 0.0;
  double alpha = 0.0;
  bool valid = true;
};

inline RightBound right_bound(const DenseGraph& dg, const VertexOrder& order, std::size_t b, std::size_t c) {
  RightBound rb;
  for (std::size_t i = 0; i + 1 < b; ++i) rb.prefix |= Mask{1} << order.sequence[i];
  for (std::size_t i = b - 1; i < c; ++i) rb.candidates |= Mask{1} << order.sequence[i];
  for (std::size_t i = b - 1; i < c; ++i) {
    const Mask v = Mask{1} << order.sequence[i];
    const double to_u = dg.weight(v, rb.candidates);
    const double to_w = dg.weight(v, rb.prefix);
    if (to_w == 0.0) {
      if (to_u > 0.0) rb.valid = false;
      continue;
    }
    rb.alpha = std::max(rb.alpha, to_u / to_w);
  }
  rb.f = dg.density(Mask{1} << order.sequence[b - 1], rb.prefix);
  return rb;
}

inline void check_right(const DenseGraph& dg, const RightBound& rb, Mask x, PropertyReport& report) {
  const double scale = (1.0 + rb.alpha) * (1.0 + rb.alpha);
  report.record(dg.density(x, x | rb.prefix), scale * rb.f, kPropertyTol);
}

struct OrderBoundReports {
  PropertyReport left{"left"};
  PropertyReport right{"right"};
};

/// Both bounds over every (b, c) with |S| < b < c <= n and every X ⊆ U.
inline OrderBoundReports check_order_bounds_exhaustive(const Graph& g, const VertexOrder& order,
                                                       const OracleBudget& budget = {}) {
  const std::size_t n = g.num_vertices();
  if (n > budget.max_subset_vertices) throw BudgetError("exhaustive order-bound check limited to " + std::to_string(budget.max_subset_vertices) + " vertices");
  const DenseGraph dg(g);
  OrderBoundReports out;
  out.left.instances = out.right.instances = 1;
  const std::size_t first_b = std::max<std::size_t>(order.source_size + 1, 2);
  for (std::size_t b = first_b; b <= n; ++b)
    for (std::size_t c = b + 1; c <= n; ++c) {
      const auto lb = left_bound(dg, order, b, c);
      for (Mask x = lb.candidates; x; x = (x - 1) & lb.candidates) check_left(dg, lb, x, out.left);
      const auto rb = right_bound(dg, order, b, c);
      if (!rb.valid) {
        ++out.right.skipped;
        continue;
      }
      for (Mask x = rb.candidates; x; x = (x - 1) & rb.candidates) check_right(dg, rb, x, out.right);
    }
  return out;
}

/// Both bounds on `samples` random (b, c, X) triples.
template <typename Rng>
OrderBoundReports check_order_bounds_sampled(const Graph& g, const VertexOrder& order, Rng& rng, std::size_t samples) {
  const std::size_t n = g.num_vertices();
  if (n > 31) throw BudgetError("sampled order-bound check limited to 31 vertices");
  const DenseGraph dg(g);
  OrderBoundReports out;
  out.left.instances = out.right.instances = 1;
  const std::size_t first_b = std::max<std::size_t>(order.source_size + 1, 2);
  if (first_b + 1 > n) return out;
  for (std::size_t t = 0; t < samples; ++t) {
    const std::size_t b = std::uniform_int_distribution<std::size_t>(first_b, n - 1)(rng);
    const std::size_t c = std::uniform_int_distribution<std::size_t>(b + 1, n)(rng);
    const auto lb = left_bound(dg, order, b, c);
    Mask x = 0;
    while (x == 0) x = static_cast<Mask>(rng()) & lb.candidates;
    check_left(dg, lb, x, out.left);
    const auto rb = right_bound(dg, order, b, c);
    if (!rb.valid) {
      ++out.right.skipped;
      continue;
    }
    check_right(dg, rb, x, out.right);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random instances

/// G(n, p) graph on labels "0".."n-1"; weights uniform in (0, 1] or all 1.
template <typename Rng>
Graph random_graph(Rng& rng, std::size_t n, double edge_prob, bool unit_weights = false) {
  GraphBuilder builder;
  for (std::size_t i = 0; i < n; ++i) builder.add_vertex(std::to_string(i));
  std::bernoulli_distribution coin(edge_prob);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (coin(rng)) builder.add_edge(u, v, unit_weights ? 1.0 : 1.0 - weight(rng));
  return std::move(builder).build();
}

/// `n` points with strictly decreasing values.
template <typename Rng>
std::vector<WeightedPoint> random_decreasing_points(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<WeightedPoint> pts(n);
  double value = 10.0 * unit(rng);
  for (auto& p : pts) {
    p.weight = 0.1 + 5.0 * unit(rng);
    p.value = value;
    value -= 0.01 + unit(rng);
  }
  return pts;
}

/// Points on a dyadic grid (integer weights, values in multiples of 1/8) so
/// that sums are exact in double precision.
template <typename Rng>
std::vector<WeightedPoint> random_dyadic_points(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<int> weight(1, 10);
  std::uniform_int_distribution<int> value(-40, 40);
  std::vector<WeightedPoint> pts(n);
  for (auto& p : pts) p = {static_cast<double>(weight(rng)), value(rng) / 8.0};
  return pts;
}

}  // namespace nestseg::oracle
