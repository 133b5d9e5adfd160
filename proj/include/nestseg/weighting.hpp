#pragma once

// Personalized PageRank from a source set and the PageRank-derived edge
// weighting schemes.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"

namespace nestseg {

struct PageRankOptions {
  double restart = 0.1;
  bool use_edge_weights = false;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct PageRankVector {
  std::vector<double> p;
  double restart = 0.1;
  double residual = 0.0;  ///< L1 change of the final iteration
  std::size_t iterations = 0;

  double operator[](VertexId v) const { return p[v]; }
};

namespace detail {

// One application of the walk operator: restart into S with probability
// `restart`, otherwise move to a neighbour (uniformly or by edge weight).
// Vertices without outgoing mass teleport into S.
class WalkOperator {
 public:
  WalkOperator(const Graph& g, const VertexSet& sources, const PageRankOptions& opt)
      : g_(g), sources_(sources), opt_(opt), out_(g.num_vertices()) {
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      out_[v] = opt.use_edge_weights ? g.weighted_degree(v) : static_cast<double>(g.degree(v));
  }

  void apply(const std::vector<double>& p, std::vector<double>& next) const {
    const std::size_t n = g_.num_vertices();
    const double follow = 1.0 - opt_.restart;
    std::vector<double> share(n, 0.0);
    double dangling = 0.0;
    for (VertexId v = 0; v < n; ++v) {
      if (out_[v] > 0.0) {
        share[v] = follow * p[v] / out_[v];
      } else {
        dangling += p[v];
      }
    }
    const double jump = (opt_.restart + follow * dangling) / static_cast<double>(sources_.size());
    for (VertexId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const auto& nb : g_.neighbors(v)) acc += share[nb.vertex] * (opt_.use_edge_weights ? nb.weight : 1.0);
      next[v] = acc;
    }
    for (VertexId s : sources_) next[s] += jump;
  }

 private:
  const Graph& g_;
  const VertexSet& sources_;
  PageRankOptions opt_;
  std::vector<double> out_;
};

inline double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace detail

/// Power iteration from the uniform distribution on `sources` until the L1
/// change drops to `tol`. Throws ConvergenceError after `max_iter` steps.
inline PageRankVector personalized_pagerank(const Graph& g, const VertexSet& sources, const PageRankOptions& opt = {}) {
  if (sources.empty()) throw Error("personalized PageRank needs a non-empty source set");
  if (!(opt.restart > 0.0 && opt.restart < 1.0)) throw Error("restart probability must lie in (0, 1)");
  for (VertexId s : sources)
    if (s >= g.num_vertices()) throw Error("source vertex out of range");

  const std::size_t n = g.num_vertices();
  const detail::WalkOperator walk(g, sources, opt);
  std::vector<double> p(n, 0.0);
  for (VertexId s : sources) p[s] = 1.0 / static_cast<double>(sources.size());
  std::vector<double> next(n, 0.0);

  PageRankVector out;
  out.restart = opt.restart;
  double residual = 0.0;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    walk.apply(p, next);
    residual = detail::l1_distance(p, next);
    p.swap(next);
    if (residual <= opt.tol) {
      out.p = std::move(p);
      out.residual = residual;
      out.iterations = it;
      return out;
    }
  }
  throw ConvergenceError("personalized PageRank did not converge in " + std::to_string(opt.max_iter) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
}

/// ||p - T(p)||_1 for the walk operator T defined by `opt`.
inline double stationarity_residual(const Graph& g, const VertexSet& sources, const PageRankVector& pr,
                                    const PageRankOptions& opt) {
  const detail::WalkOperator walk(g, sources, opt);
  std::vector<double> next(g.num_vertices(), 0.0);
  walk.apply(pr.p, next);
  return detail::l1_distance(pr.p, next);
}

enum class WeightingScheme { norm, sum, min, original };

inline constexpr WeightingScheme kPageRankSchemes[] = {WeightingScheme::norm, WeightingScheme::sum,
                                                       WeightingScheme::min};

inline std::string_view to_string(WeightingScheme s) {
  switch (s) {
    case WeightingScheme::norm:
      return "norm";
    case WeightingScheme::sum:
      return "sum";
    case WeightingScheme::min:
      return "min";
    case WeightingScheme::original:
      return "original";
  }
  return "?";
}

inline std::optional<WeightingScheme> parse_scheme(std::string_view s) {
  for (auto scheme : {WeightingScheme::norm, WeightingScheme::sum, WeightingScheme::min, WeightingScheme::original})
    if (to_string(scheme) == s) return scheme;
  return std::nullopt;
}

/// Replaces edge weights using the PageRank scores of the endpoints:
///   norm: p(u)/deg(u) + p(v)/deg(v)   (deg = unweighted degree)
///   sum:  p(u) + p(v)
///   min:  min(p(u), p(v))
/// `original` returns the graph unchanged.
inline Graph apply_weighting(const Graph& g, const PageRankVector& pr, WeightingScheme scheme) {
  if (pr.p.size() != g.num_vertices()) throw Error("PageRank vector does not match the graph");
  switch (scheme) {
    case WeightingScheme::original:
      return g;
    case WeightingScheme::norm:
      return g.reweighted([&](VertexId u, VertexId v, double) {
        return pr[u] / static_cast<double>(g.degree(u)) + pr[v] / static_cast<double>(g.degree(v));
      });
    case WeightingScheme::sum:
      return g.reweighted([&](VertexId u, VertexId v, double) { return pr[u] + pr[v]; });
    case WeightingScheme::min:
      return g.reweighted([&](VertexId u, VertexId v, double) { return std::min(pr[u], pr[v]); });
  }
  return g;
}

}  // namespace nestseg
