#pragma once

// Optimal nested community sequence for a fixed vertex order.
//
// Each vertex v_i after the source prefix contributes an edge group P_i: the
// i - 1 completed slots joining it to its predecessors. A community sequence
// cut at positions b_0 < ... < b_k is a segmentation of those groups, and its
// uniformity score equals the weighted within-segment SSE of the group
// densities plus the (constant) SSE inside each group. Segment centroids must
// strictly decrease, which is solved exactly by pooling adjacent violators
// and running a k-segment dynamic program over the pooled blocks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"
#include "nestseg/ordering.hpp"

namespace nestseg {

/// Summary of the edge group joining one vertex to all earlier vertices.
struct GroupPoint {
  VertexId vertex = 0;
  std::size_t pair_count = 0;  ///< a: completed slots to predecessors
  double density = 0.0;        ///< x: mean slot weight
  double internal_sse = 0.0;   ///< sum over the slots of (w - x)^2
};

struct WeightedPoint {
  double weight = 0.0;
  double value = 0.0;
};

/// A run [first, last) of input points pooled to their weighted mean.
struct Block {
  std::size_t first = 0;
  std::size_t last = 0;
  double weight = 0.0;
  double sum = 0.0;  ///< sum of weight * value
  double sse = 0.0;  ///< weighted SSE of the pooled points around mean()

  double mean() const { return sum / weight; }
};

inline constexpr double kSseClamp = 1e-12;

/// Edge groups for every position after the source prefix of `order`.
inline std::vector<GroupPoint> build_group_sequence(const Graph& g, const VertexOrder& order) {
  if (order.source_size == 0) throw Error("edge groups need a non-empty source set");
  const auto pos = order.positions();
  std::vector<GroupPoint> points;
  points.reserve(order.size() - order.source_size);
  for (std::size_t i = order.source_size; i < order.size(); ++i) {
    const VertexId v = order.sequence[i];
    double weight = 0.0;
    std::size_t actual = 0;
    for (const auto& nb : g.neighbors(v))
      if (pos[nb.vertex] < i) {
        weight += nb.weight;
        ++actual;
      }
    GroupPoint pt;
    pt.vertex = v;
    pt.pair_count = i;
    pt.density = weight / static_cast<double>(i);
    double sse = static_cast<double>(i - actual) * pt.density * pt.density;
    for (const auto& nb : g.neighbors(v))
      if (pos[nb.vertex] < i) sse += (nb.weight - pt.density) * (nb.weight - pt.density);
    pt.internal_sse = sse < 0.0 && sse > -kSseClamp ? 0.0 : sse;
    points.push_back(pt);
  }
  return points;
}

inline std::vector<WeightedPoint> as_weighted_points(std::span<const GroupPoint> groups) {
  std::vector<WeightedPoint> pts;
  pts.reserve(groups.size());
  for (const auto& gp : groups) pts.push_back({static_cast<double>(gp.pair_count), gp.density});
  return pts;
}

/// Antitonic pooling of adjacent violators. A block is merged into its
/// predecessor while the predecessor's mean is not strictly larger, so the
/// output means are strictly decreasing. Linear time.
inline std::vector<Block> pav_pool(std::span<const WeightedPoint> points) {
  std::vector<Block> stack;
  stack.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.weight > 0.0)) throw Error("pooling weights must be positive");
    Block cur{i, i + 1, p.weight, p.weight * p.value, 0.0};
    while (!stack.empty() && stack.back().mean() <= cur.mean()) {
      const Block& prev = stack.back();
      const double gap = prev.mean() - cur.mean();
      Block merged{prev.first, cur.last, prev.weight + cur.weight, prev.sum + cur.sum,
                   prev.sse + cur.sse + prev.weight * cur.weight / (prev.weight + cur.weight) * gap * gap};
      stack.pop_back();
      cur = merged;
    }
    stack.push_back(cur);
  }
  return stack;
}

/// Each point as its own block; for segmenting sequences that are already
/// strictly decreasing.
inline std::vector<Block> singleton_blocks(std::span<const WeightedPoint> points) {
  std::vector<Block> blocks;
  blocks.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    blocks.push_back({i, i + 1, points[i].weight, points[i].weight * points[i].value, 0.0});
  return blocks;
}

enum class DpStrategy {
  automatic,           ///< quadratic up to kQuadraticDpLimit blocks, else divide_and_conquer
  quadratic,           ///< plain Bellman recursion, O(N^2 k)
  divide_and_conquer,  ///< monotone-argmin recursion, O(k N log N)
};

inline constexpr std::size_t kQuadraticDpLimit = 4096;

struct SegmentOptions {
  /// Every segment centroid must be strictly below this value.
  double centroid_bound = std::numeric_limits<double>::infinity();
  DpStrategy strategy = DpStrategy::automatic;
};

struct Segmentation {
  std::vector<std::size_t> breakpoints;  ///< block indices, 0 = c_0 < ... < c_k = N
  double cost = 0.0;                     ///< weighted SSE of block means around segment centroids
};

/// O(1) weighted SSE of block means over any block range, from prefix sums of
/// A, A*m and A*m^2 (means shifted by their global weighted average).
class SegmentCost {
 public:
  explicit SegmentCost(std::span<const Block> blocks) : weight_(blocks.size() + 1), first_(weight_), second_(weight_) {
    double total_w = 0.0;
    double total_s = 0.0;
    for (const auto& b : blocks) {
      total_w += b.weight;
      total_s += b.sum;
    }
    shift_ = blocks.empty() ? 0.0 : total_s / total_w;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const double m = blocks[i].mean() - shift_;
      weight_[i + 1] = weight_[i] + blocks[i].weight;
      first_[i + 1] = first_[i] + blocks[i].weight * m;
      second_[i + 1] = second_[i] + blocks[i].weight * m * m;
    }
  }

  /// Blocks [i, j).
  double operator()(std::size_t i, std::size_t j) const {
    if (j - i == 1) return 0.0;
    const double w = weight_[j] - weight_[i];
    const double s = first_[j] - first_[i];
    const double c = (second_[j] - second_[i]) - s * s / w;
    return c > 0.0 ? c : 0.0;
  }

  double centroid(std::size_t i, std::size_t j) const { return (first_[j] - first_[i]) / (weight_[j] - weight_[i]) + shift_; }

 private:
  std::vector<double> weight_, first_, second_;
  double shift_ = 0.0;
};

namespace detail {

// Smallest r such that the first segment [0, r) satisfies the centroid bound.
// Prefix centroids of strictly decreasing blocks decrease in r.
inline std::size_t first_feasible_end(std::span<const Block> blocks, double bound) {
  double w = 0.0;
  double s = 0.0;
  for (std::size_t r = 1; r <= blocks.size(); ++r) {
    w += blocks[r - 1].weight;
    s += blocks[r - 1].sum;
    if (s / w < bound) return r;
  }
  return blocks.size() + 1;
}

}  // namespace detail

/// Optimal segmentation of `blocks` (strictly decreasing means) into k
/// contiguous segments minimizing total weighted SSE around the segment
/// centroids. Ties resolve to the earliest breakpoints.
inline Segmentation segment_dp(std::span<const Block> blocks, std::size_t k, const SegmentOptions& opt = {}) {
  const std::size_t n = blocks.size();
  const std::size_t r_min = detail::first_feasible_end(blocks, opt.centroid_bound);
  const std::size_t max_k = r_min > n ? 0 : n - r_min + 1;
  if (k == 0) throw Error("k must be at least 1");
  if (k > max_k)
    throw InfeasibleError("k exceeds available monotone blocks (k = " + std::to_string(k) +
                              ", max feasible k = " + std::to_string(max_k) + ")",
                          max_k);
  for (std::size_t i = 1; i < n; ++i)
    if (!(blocks[i].mean() < blocks[i - 1].mean())) throw Error("block means must be strictly decreasing");

  const SegmentCost cost(blocks);
  constexpr double inf = std::numeric_limits<double>::infinity();
  // prev[i]: best cost of covering blocks [0, i) with the current number of segments.
  std::vector<double> prev(n + 1, inf);
  std::vector<double> cur(n + 1, inf);
  std::vector<std::vector<std::size_t>> arg(k + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = r_min; i <= n; ++i) prev[i] = cost(0, i);

  const bool quadratic =
      opt.strategy == DpStrategy::quadratic || (opt.strategy == DpStrategy::automatic && n <= kQuadraticDpLimit);

  for (std::size_t j = 2; j <= k; ++j) {
    std::fill(cur.begin(), cur.end(), inf);
    auto& back = arg[j];
    // Layer j covers at least j blocks and leaves room for the remaining k - j segments.
    const std::size_t lo_i = r_min + j - 1;
    const std::size_t hi_i = n - (k - j);
    auto best_split = [&](std::size_t i, std::size_t p_lo, std::size_t p_hi) {
      double best = inf;
      std::size_t best_p = p_lo;
      for (std::size_t p = p_lo; p <= p_hi; ++p) {
        const double c = prev[p] + cost(p, i);
        if (c < best) {
          best = c;
          best_p = p;
        }
      }
      cur[i] = best;
      back[i] = best_p;
    };
    if (quadratic) {
      for (std::size_t i = lo_i; i <= hi_i; ++i) best_split(i, r_min + j - 2, i - 1);
    } else {
      struct Task {
        std::size_t lo, hi, opt_lo, opt_hi;
      };
      std::vector<Task> tasks{{lo_i, hi_i, r_min + j - 2, hi_i - 1}};
      while (!tasks.empty()) {
        const Task t = tasks.back();
        tasks.pop_back();
        if (t.lo > t.hi) continue;
        const std::size_t mid = t.lo + (t.hi - t.lo) / 2;
        best_split(mid, t.opt_lo, std::min(mid - 1, t.opt_hi));
        const std::size_t split = back[mid];
        if (mid > t.lo) tasks.push_back({t.lo, mid - 1, t.opt_lo, split});
        tasks.push_back({mid + 1, t.hi, split, t.opt_hi});
      }
    }
    prev.swap(cur);
  }

  Segmentation out;
  out.cost = prev[n];
  out.breakpoints.assign(k + 1, 0);
  out.breakpoints[k] = n;
  for (std::size_t j = k; j >= 2; --j) out.breakpoints[j - 1] = arg[j][out.breakpoints[j]];
  return out;
}

/// A nested community sequence S = V_0 ⊂ V_1 ⊂ ... ⊂ V_k = V along an order.
struct CommunitySequence {
  VertexOrder order;
  std::vector<std::size_t> breakpoints;      ///< b_0 = |S| < ... < b_k = n; V_j = first b_j vertices
  std::vector<double> segment_centroids;     ///< mean slot weight of E(V_j) \ E(V_{j-1})
  std::vector<double> community_densities;   ///< induced density of V_j
  std::vector<double> segment_scores;        ///< uniformity score of E(V_j) \ E(V_{j-1})
  double total_score = 0.0;

  std::size_t k() const noexcept { return segment_scores.size(); }
};

struct SequenceScore {
  double total_score = 0.0;
  std::vector<double> segment_scores;
  std::vector<double> segment_centroids;
  std::vector<double> community_densities;
};

/// Scores the sequence cut at `breakpoints` straight from the graph: each
/// edge belongs to the segment of its later endpoint, every non-edge slot in
/// the segment contributes (0 - centroid)^2.
inline SequenceScore score_sequence(const Graph& g, const VertexOrder& order, std::span<const std::size_t> breakpoints) {
  const std::size_t n = order.size();
  if (breakpoints.size() < 2) throw Error("breakpoints need at least b_0 and b_k");
  if (breakpoints.front() != order.source_size) throw Error("b_0 must equal the source-set size");
  if (breakpoints.back() != n) throw Error("b_k must equal the number of vertices");
  for (std::size_t j = 1; j < breakpoints.size(); ++j)
    if (breakpoints[j] <= breakpoints[j - 1]) throw Error("breakpoints must be strictly increasing");
  if (breakpoints[1] < 2) throw Error("first community needs at least two vertices");

  const std::size_t k = breakpoints.size() - 1;
  const auto pos = order.positions();
  // segment_of[p]: segment of position p; 0 marks the source prefix.
  std::vector<std::size_t> segment_of(n, 0);
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t p = breakpoints[j - 1]; p < breakpoints[j]; ++p) segment_of[p] = j;

  auto slots = [](std::size_t m) { return static_cast<double>(m) * static_cast<double>(m - 1) / 2.0; };
  std::vector<double> weight(k + 1, 0.0);
  std::vector<std::size_t> actual(k + 1, 0);
  g.for_each_edge([&](VertexId u, VertexId v, double w) {
    const std::size_t seg = segment_of[std::max(pos[u], pos[v])];
    weight[seg] += w;
    ++actual[seg];
  });

  SequenceScore out;
  std::vector<double> centroid(k + 1, 0.0);
  std::vector<double> count(k + 1, 0.0);
  for (std::size_t j = 1; j <= k; ++j) {
    count[j] = slots(breakpoints[j]) - slots(breakpoints[j - 1]);
    centroid[j] = weight[j] / count[j];
  }
  std::vector<double> sse(k + 1, 0.0);
  g.for_each_edge([&](VertexId u, VertexId v, double w) {
    const std::size_t seg = segment_of[std::max(pos[u], pos[v])];
    if (seg > 0) sse[seg] += (w - centroid[seg]) * (w - centroid[seg]);
  });
  double inner = weight[0];
  for (std::size_t j = 1; j <= k; ++j) {
    sse[j] += (count[j] - static_cast<double>(actual[j])) * centroid[j] * centroid[j];
    inner += weight[j];
    out.segment_scores.push_back(sse[j]);
    out.segment_centroids.push_back(centroid[j]);
    out.community_densities.push_back(inner / slots(breakpoints[j]));
    out.total_score += sse[j];
  }
  return out;
}

/// Segment-by-segment evaluation through the edge-group reduction: for each
/// segment, the weighted SSE of the group densities around the segment
/// centroid plus the groups' internal SSE.
inline double reduced_score(std::span<const GroupPoint> groups, std::size_t source_size,
                            std::span<const std::size_t> breakpoints) {
  double total = 0.0;
  for (std::size_t j = 1; j < breakpoints.size(); ++j) {
    const std::size_t lo = breakpoints[j - 1] - source_size;
    const std::size_t hi = breakpoints[j] - source_size;
    double w = 0.0;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      w += static_cast<double>(groups[i].pair_count);
      s += static_cast<double>(groups[i].pair_count) * groups[i].density;
    }
    const double mu = s / w;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = groups[i].density - mu;
      total += static_cast<double>(groups[i].pair_count) * d * d + groups[i].internal_sse;
    }
  }
  return total;
}

namespace detail {

// d(S) when |S| >= 2: the first community must stay below it.
inline double source_density_bound(const Graph& g, const VertexOrder& order) {
  const std::size_t s = order.source_size;
  if (s < 2) return std::numeric_limits<double>::infinity();
  const VertexSet sources = order.prefix(s);
  return cross_weight(g, sources, sources) / (static_cast<double>(s) * static_cast<double>(s - 1) / 2.0);
}

}  // namespace detail

/// Largest k for which `discover` has a feasible answer along `order`.
inline std::size_t max_feasible_k(const Graph& g, const VertexOrder& order) {
  const auto blocks = pav_pool(as_weighted_points(build_group_sequence(g, order)));
  if (blocks.empty()) return 0;
  const std::size_t r_min = detail::first_feasible_end(blocks, detail::source_density_bound(g, order));
  return r_min > blocks.size() ? 1 : std::max<std::size_t>(1, blocks.size() - r_min + 1);
}

/// Optimal k-community sequence along `order`: edge groups, PAV pooling,
/// k-segment DP over the blocks.
///
/// Segment centroids are strictly decreasing. When |S| >= 2 and k >= 2 the
/// first centroid must also lie below d(S); otherwise d(V_2) could exceed
/// d(V_1) even with decreasing centroids.
inline CommunitySequence discover(const Graph& g, const VertexOrder& order, std::size_t k,
                                  DpStrategy strategy = DpStrategy::automatic) {
  if (k == 0) throw Error("k must be at least 1");
  order.validate(g.num_vertices());
  const std::size_t s = order.source_size;
  const auto groups = build_group_sequence(g, order);
  const auto points = as_weighted_points(groups);
  const auto blocks = pav_pool(points);

  SegmentOptions opt;
  opt.strategy = strategy;
  if (k >= 2) opt.centroid_bound = detail::source_density_bound(g, order);
  const double source_weight = s >= 2 ? cross_weight(g, order.prefix(s), order.prefix(s)) : 0.0;
  Segmentation seg;
  try {
    seg = segment_dp(blocks, k, opt);
  } catch (const InfeasibleError&) {
    const std::size_t max_k = max_feasible_k(g, order);
    throw InfeasibleError("k exceeds available monotone blocks (k = " + std::to_string(k) +
                              ", max feasible k = " + std::to_string(max_k) + ")",
                          max_k);
  }

  CommunitySequence out;
  out.order = order;
  out.breakpoints.push_back(s);
  for (std::size_t j = 1; j < seg.breakpoints.size(); ++j) {
    const std::size_t c = seg.breakpoints[j];
    out.breakpoints.push_back(c == blocks.size() ? order.size() : s + blocks[c].first);
  }

  double inner = source_weight;
  for (std::size_t j = 1; j <= k; ++j) {
    const std::size_t lo = out.breakpoints[j - 1] - s;
    const std::size_t hi = out.breakpoints[j] - s;
    double w = 0.0;
    double sum = 0.0;
    double internal = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      w += static_cast<double>(groups[i].pair_count);
      sum += static_cast<double>(groups[i].pair_count) * groups[i].density;
      internal += groups[i].internal_sse;
    }
    const double mu = sum / w;
    double between = 0.0;
    for (std::size_t b = seg.breakpoints[j - 1]; b < seg.breakpoints[j]; ++b) {
      const double d = blocks[b].mean() - mu;
      between += blocks[b].sse + blocks[b].weight * d * d;
    }
    inner += sum;
    const double m = static_cast<double>(out.breakpoints[j]);
    out.segment_centroids.push_back(mu);
    out.community_densities.push_back(inner / (m * (m - 1.0) / 2.0));
    out.segment_scores.push_back(internal + between);
    out.total_score += internal + between;
  }

  for (std::size_t j = 1; j < k; ++j) {
    if (!(out.segment_centroids[j] < out.segment_centroids[j - 1]))
      throw Error("internal error: segment centroids not strictly decreasing");
    if (!(out.community_densities[j] < out.community_densities[j - 1]))
      throw Error("internal error: community densities not strictly decreasing");
  }
  return out;
}

}  // namespace nestseg
