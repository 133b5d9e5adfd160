#pragma once

// End-to-end runs: ingest, weight by personalized PageRank, order, segment,
// report. Also the baseline comparison and the randomized property audit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nestseg/error.hpp"
#include "nestseg/graph.hpp"
#include "nestseg/oracle.hpp"
#include "nestseg/ordering.hpp"
#include "nestseg/segmentation.hpp"
#include "nestseg/weighting.hpp"

namespace nestseg {

struct RunConfig {
  std::vector<std::string> sources;  ///< empty: the highest-degree vertex
  std::size_t k = 3;
  WeightingScheme scheme = WeightingScheme::sum;
  OrderKind order = OrderKind::peel;
  PageRankOptions pagerank;
};

struct RunResult {
  Graph graph;  ///< input graph with the scheme's weights
  VertexSet sources;
  PageRankVector pagerank;
  std::vector<GroupPoint> groups;
  CommunitySequence sequence;
};

/// Highest unweighted degree, lowest id on ties.
inline VertexId max_degree_vertex(const Graph& g) {
  if (g.num_vertices() == 0) throw Error("graph has no vertices");
  VertexId best = 0;
  for (VertexId v = 1; v < g.num_vertices(); ++v)
    if (g.degree(v) > g.degree(best)) best = v;
  return best;
}

inline VertexSet resolve_sources(const Graph& g, const std::vector<std::string>& labels) {
  if (labels.empty()) return VertexSet{max_degree_vertex(g)};
  std::vector<VertexId> ids;
  for (const auto& label : labels) {
    const auto id = g.find(label);
    if (!id) throw Error("unknown source vertex '" + label + "'");
    ids.push_back(*id);
  }
  return VertexSet(std::move(ids));
}

inline VertexOrder build_order(const Graph& g, const VertexSet& sources, const PageRankVector& pr, OrderKind kind) {
  switch (kind) {
    case OrderKind::peel:
      return sort_vertices(g, sources);
    case OrderKind::degree:
      return degree_order(g, sources);
    case OrderKind::pagerank:
      return pagerank_order(g, sources, pr);
    case OrderKind::hops:
      return hops_sequence(g, sources).order;
  }
  throw Error("unknown order kind");
}

inline bool same_score(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300}) + 1e-15;
}

/// Throws unless the sequence's total matches a direct re-scoring from the graph.
inline void revalidate(const Graph& g, const CommunitySequence& seq) {
  const auto direct = score_sequence(g, seq.order, seq.breakpoints);
  if (!same_score(direct.total_score, seq.total_score))
    throw Error("internal error: reported score " + std::to_string(seq.total_score) +
                " disagrees with direct evaluation " + std::to_string(direct.total_score));
}

inline RunResult run_pipeline(const Graph& input, const RunConfig& cfg) {
  if (cfg.k == 0) throw Error("k must be at least 1");
  RunResult out;
  out.sources = resolve_sources(input, cfg.sources);
  out.pagerank = personalized_pagerank(input, out.sources, cfg.pagerank);
  out.graph = apply_weighting(input, out.pagerank, cfg.scheme);
  const VertexOrder order = build_order(out.graph, out.sources, out.pagerank, cfg.order);
  out.groups = build_group_sequence(out.graph, order);
  out.sequence = discover(out.graph, order, cfg.k);
  revalidate(out.graph, out.sequence);
  return out;
}

inline nlohmann::json to_json(const Graph& g, const CommunitySequence& seq) {
  using nlohmann::json;
  json order = json::array();
  for (VertexId v : seq.order.sequence) order.push_back(g.label(v));
  json communities = json::array();
  for (std::size_t j = 0; j < seq.k(); ++j) {
    json vertices = json::array();
    for (std::size_t i = 0; i < seq.breakpoints[j + 1]; ++i) vertices.push_back(g.label(seq.order.sequence[i]));
    communities.push_back({{"vertices", std::move(vertices)},
                           {"community_density", seq.community_densities[j]},
                           {"segment_centroid", seq.segment_centroids[j]},
                           {"segment_score", seq.segment_scores[j]}});
  }
  return {{"order", std::move(order)},
          {"breakpoints", seq.breakpoints},
          {"communities", std::move(communities)},
          {"total_score", seq.total_score}};
}

namespace detail {

inline constexpr const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33",
                                           "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62", "#8da0cb"};

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Graphviz rendering: fill color = community index (0 for the sources,
/// j for vertices first entering V_j); sources drawn as double circles.
inline std::string export_dot(const Graph& g, const CommunitySequence& seq) {
  std::vector<std::size_t> community(g.num_vertices(), 0);
  for (std::size_t j = 1; j < seq.breakpoints.size(); ++j)
    for (std::size_t i = seq.breakpoints[j - 1]; i < seq.breakpoints[j]; ++i) community[seq.order.sequence[i]] = j;
  std::ostringstream out;
  out << "graph communities {\n  node [style=filled];\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const std::size_t c = community[v];
    out << "  " << detail::dot_quote(g.label(v)) << " [fillcolor=\""
        << detail::kPalette[c % std::size(detail::kPalette)] << "\", community=" << c
        << (c == 0 ? ", shape=doublecircle" : "") << "];\n";
  }
  g.for_each_edge([&](VertexId u, VertexId v, double w) {
    out << "  " << detail::dot_quote(g.label(u)) << " -- " << detail::dot_quote(g.label(v)) << " [weight=" << w
        << "];\n";
  });
  out << "}\n";
  return out.str();
}

/// The (a_i, x_i) edge-group sequence, one row per vertex after the sources.
inline std::string export_tsv(const Graph& g, std::span<const GroupPoint> groups, std::size_t source_size) {
  std::ostringstream out;
  out.precision(17);
  out << "position\tvertex\tpair_count\tdensity\tinternal_sse\n";
  for (std::size_t i = 0; i < groups.size(); ++i)
    out << source_size + i + 1 << '\t' << g.label(groups[i].vertex) << '\t' << groups[i].pair_count << '\t'
        << groups[i].density << '\t' << groups[i].internal_sse << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Baseline comparison

struct ComparisonCell {
  WeightingScheme scheme;
  OrderKind order;
  std::size_t k;
  std::optional<double> score;  ///< nullopt when k is infeasible along this order
  std::optional<double> ratio;  ///< score / score at k = 1 for the same order and scheme
};

struct HopsComparison {
  WeightingScheme scheme;
  std::size_t k;  ///< number of hop levels beyond the sources
  double hops_score;
  std::optional<double> peel_score;
};

struct ComparisonReport {
  std::vector<ComparisonCell> cells;
  std::vector<HopsComparison> hops;
  std::size_t comparisons = 0;        ///< (scheme, k) pairs
  std::size_t peel_at_most_both = 0;  ///< peel <= degree and peel <= pagerank
  std::size_t peel_beats_both = 0;    ///< strictly better than both
  std::size_t peel_loses_degree = 0;
  std::size_t peel_loses_pagerank = 0;
  std::size_t hops_wins = 0;  ///< schemes where peel <= hops baseline

  double at_most_both_rate() const {
    return comparisons ? static_cast<double>(peel_at_most_both) / static_cast<double>(comparisons) : 0.0;
  }
};

namespace detail {

inline std::optional<double> score_or_infeasible(const Graph& g, const VertexOrder& order, std::size_t k) {
  try {
    return discover(g, order, k).total_score;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

// a <= b up to relative rounding; an infeasible b always loses.
inline bool at_most(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a) return false;
  if (!b) return true;
  return *a <= *b || same_score(*a, *b);
}

}  // namespace detail

/// Peel vs. degree vs. PageRank orders for every PageRank scheme and
/// k in [k_min, k_max], plus the BFS-level baseline at its own k.
inline ComparisonReport compare_baselines(const Graph& input, const RunConfig& cfg, std::size_t k_min,
                                          std::size_t k_max) {
  if (k_min == 0 || k_min > k_max) throw Error("invalid k range");
  ComparisonReport report;
  const VertexSet sources = resolve_sources(input, cfg.sources);
  const PageRankVector pr = personalized_pagerank(input, sources, cfg.pagerank);
  for (const WeightingScheme scheme : kPageRankSchemes) {
    const Graph g = apply_weighting(input, pr, scheme);
    const VertexOrder peel = sort_vertices(g, sources);
    const VertexOrder orders[] = {peel, degree_order(g, sources), pagerank_order(g, sources, pr)};
    const OrderKind kinds[] = {OrderKind::peel, OrderKind::degree, OrderKind::pagerank};
    std::optional<double> reference[3];
    for (std::size_t o = 0; o < 3; ++o) reference[o] = detail::score_or_infeasible(g, orders[o], 1);

    for (std::size_t k = k_min; k <= k_max; ++k) {
      std::optional<double> scores[3];
      for (std::size_t o = 0; o < 3; ++o) {
        scores[o] = detail::score_or_infeasible(g, orders[o], k);
        std::optional<double> ratio;
        if (scores[o] && reference[o] && *reference[o] > 0.0) ratio = *scores[o] / *reference[o];
        report.cells.push_back({scheme, kinds[o], k, scores[o], ratio});
      }
      ++report.comparisons;
      const bool vs_degree = detail::at_most(scores[0], scores[1]);
      const bool vs_pagerank = detail::at_most(scores[0], scores[2]);
      report.peel_loses_degree += !vs_degree;
      report.peel_loses_pagerank += !vs_pagerank;
      if (vs_degree && vs_pagerank) {
        ++report.peel_at_most_both;
        if (!detail::at_most(scores[1], scores[0]) && !detail::at_most(scores[2], scores[0])) ++report.peel_beats_both;
      }
    }

    const auto hops = hops_sequence(g, sources);
    if (hops.breakpoints.size() >= 2) {
      std::vector<std::size_t> cuts{sources.size()};
      cuts.insert(cuts.end(), hops.breakpoints.begin() + 1, hops.breakpoints.end());
      const std::size_t k_hops = cuts.size() - 1;
      const double hops_score = score_sequence(g, hops.order, cuts).total_score;
      const auto peel_score = detail::score_or_infeasible(g, peel, k_hops);
      report.hops.push_back({scheme, k_hops, hops_score, peel_score});
      report.hops_wins += detail::at_most(peel_score, hops_score);
    }
  }
  return report;
}

inline nlohmann::json to_json(const ComparisonReport& r) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"scheme", to_string(c.scheme)},
                     {"order", to_string(c.order)},
                     {"k", c.k},
                     {"score", opt(c.score)},
                     {"ratio", opt(c.ratio)}});
  json hops = json::array();
  for (const auto& h : r.hops)
    hops.push_back({{"scheme", to_string(h.scheme)},
                    {"k", h.k},
                    {"hops_score", h.hops_score},
                    {"peel_score", opt(h.peel_score)},
                    {"ratio", h.peel_score && h.hops_score > 0.0 ? json(*h.peel_score / h.hops_score) : json(nullptr)}});
  return {{"cells", std::move(cells)},
          {"hops", std::move(hops)},
          {"comparisons", r.comparisons},
          {"peel_at_most_both", r.peel_at_most_both},
          {"peel_beats_both", r.peel_beats_both},
          {"peel_loses_degree", r.peel_loses_degree},
          {"peel_loses_pagerank", r.peel_loses_pagerank},
          {"hops_wins", r.hops_wins}};
}

// ---------------------------------------------------------------------------
// Randomized property audit

inline const std::vector<std::string>& known_properties() {
  static const std::vector<std::string> props{"density", "left", "right", "pav", "dp"};
  return props;
}

/// Runs `trials` random instances of each named property against the
/// exhaustive oracles. Unknown names throw Error.
inline std::vector<oracle::PropertyReport> verify_properties(const std::vector<std::string>& props,
                                                             std::uint64_t seed, std::size_t trials) {
  std::vector<oracle::PropertyReport> reports;
  for (const auto& name : props) {
    if (std::find(known_properties().begin(), known_properties().end(), name) == known_properties().end())
      throw Error("unknown property '" + name + "'");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> prob(0.2, 0.9);
    oracle::PropertyReport report{name};
    for (std::size_t t = 0; t < trials; ++t) {
      if (name == "pav") {
        const auto pts = oracle::random_dyadic_points(rng, std::uniform_int_distribution<std::size_t>(1, 12)(rng));
        double pooled = 0.0;
        for (const auto& b : pav_pool(pts)) pooled += b.sse;
        report.record(std::abs(pooled - oracle::brute_force_antitonic_fit(pts).sse), 0.0, 1e-9);
        ++report.instances;
      } else if (name == "dp") {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(4, n))(rng);
        const auto pts = oracle::random_decreasing_points(rng, n);
        const auto blocks = singleton_blocks(pts);
        const auto brute = oracle::brute_force_segmentation(pts, k);
        report.record(std::abs(segment_dp(blocks, k).cost - brute->cost), 0.0, 1e-9);
        ++report.instances;
      } else if (name == "density") {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 7)(rng);
        const Graph g = oracle::random_graph(rng, n, prob(rng));
        const VertexSet s{static_cast<VertexId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng))};
        const auto best = oracle::brute_force_nested(g, s, 2);
        if (!best) {
          ++report.instances;
          ++report.skipped;
          continue;
        }
        report.merge(oracle::check_prop_density(g, *best));
      } else {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 12)(rng);
        const Graph g = oracle::random_graph(rng, n, prob(rng));
        const VertexSet s{static_cast<VertexId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng))};
        const auto bounds = oracle::check_order_bounds_exhaustive(g, sort_vertices(g, s));
        report.merge(name == "left" ? bounds.left : bounds.right);
      }
    }
    reports.push_back(report);
  }
  return reports;
}

}  // namespace nestseg
