#include <gtest/gtest.h>

#include <random>

#include "nestseg/oracle.hpp"
#include "nestseg/ordering.hpp"
#include "support.hpp"

using namespace nestseg;

namespace {

std::vector<VertexId> seq(const VertexOrder& o) { return o.sequence; }

// Reference peeling: rescan every remaining vertex at each step.
VertexOrder naive_peel(const Graph& g, const VertexSet& s) {
  const std::size_t n = g.num_vertices();
  std::vector<char> gone(n, 0);
  std::vector<VertexId> removal;
  for (std::size_t step = s.size(); step < n; ++step) {
    std::optional<VertexId> best;
    double best_deg = 0.0;
    for (VertexId v = 0; v < n; ++v) {
      if (gone[v] || s.contains(v)) continue;
      double d = 0.0;
      for (const auto& nb : g.neighbors(v))
        if (!gone[nb.vertex]) d += nb.weight;
      if (!best || d < best_deg) best = v, best_deg = d;
    }
    gone[*best] = 1;
    removal.push_back(*best);
  }
  VertexOrder o;
  o.source_size = s.size();
  o.sequence.assign(s.begin(), s.end());
  o.sequence.insert(o.sequence.end(), removal.rbegin(), removal.rend());
  return o;
}

// Real weights: rounding may reorder near-ties, so only require that every
// removal had minimum remaining degree up to rounding.
bool is_min_degree_peel(const Graph& g, const VertexOrder& order) {
  const std::size_t n = g.num_vertices();
  std::vector<char> gone(n, 0);
  for (std::size_t i = n; i-- > order.source_size;) {
    auto remaining = [&](VertexId v) {
      double d = 0.0;
      for (const auto& nb : g.neighbors(v))
        if (!gone[nb.vertex]) d += nb.weight;
      return d;
    };
    const VertexId x = order.sequence[i];
    for (std::size_t j = order.source_size; j < i; ++j)
      if (remaining(order.sequence[j]) < remaining(x) - 1e-9) return false;
    gone[x] = 1;
  }
  return true;
}

}  // namespace

TEST(Peel, Path) {
  const auto order = sort_vertices(testing_support::path4(), {0});
  EXPECT_EQ(seq(order), (std::vector<VertexId>{0, 1, 2, 3}));
  EXPECT_EQ(order.source_size, 1u);
}

TEST(Peel, AllSources) {
  const auto order = sort_vertices(testing_support::path4(), VertexSet::all(4));
  EXPECT_EQ(seq(order), (std::vector<VertexId>{0, 1, 2, 3}));
}

TEST(Peel, StarLeavesInDescendingId) {
  const Graph star = make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  EXPECT_EQ(seq(sort_vertices(star, {0})), (std::vector<VertexId>{0, 3, 2, 1}));
}

TEST(Peel, MatchesRescanOnRandomGraphs) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
    // Unit weights exercise the tie-breaking; real weights the ordering.
    const Graph g = oracle::random_graph(rng, n, 0.3, t % 2 == 0);
    const VertexSet s = VertexSet::from_mask(rng() & ((1u << n) - 1) & rng());
    const auto order = sort_vertices(g, s);
    order.validate(n, &s);
    if (t % 2 == 0) {
      EXPECT_EQ(order.sequence, naive_peel(g, s).sequence) << "trial " << t;
    } else {
      EXPECT_TRUE(is_min_degree_peel(g, order)) << "trial " << t;
    }
  }
}

TEST(DensestPrefix, TrianglePlusPendant) {
  const Graph g = make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {2, 3, 1.0}});
  const auto best = densest_prefix(g, sort_vertices(g, {}));
  EXPECT_EQ(best.vertices, (VertexSet{0, 1, 2}));
  EXPECT_DOUBLE_EQ(best.density, 1.0);
}

TEST(DensestPrefix, SingleEdge) {
  const Graph g = make_graph(2, {{0, 1, 1.0}});
  const auto best = densest_prefix(g, sort_vertices(g, {}));
  EXPECT_EQ(best.vertices.size(), 2u);
  EXPECT_DOUBLE_EQ(best.density, 0.5);
}

TEST(DensestPrefix, HalfOfOptimumOnRandomGraphs) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const Graph g = oracle::random_graph(rng, n, 0.5);
    const auto got = densest_prefix(g, sort_vertices(g, {}));
    EXPECT_NEAR(got.density, avg_degree_density(g, got.vertices), 1e-12);
    EXPECT_GE(got.density, 0.5 * oracle::brute_force_densest_subgraph(g).density - 1e-12);
  }
}

TEST(Hops, Levels) {
  const Graph path = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  EXPECT_EQ(hops_levels(path, {0}), (std::vector<VertexSet>{{0}, {1}, {2}}));
  EXPECT_EQ(hops_levels(path, VertexSet::all(3)).size(), 1u);
  const Graph iso = make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto levels = hops_levels(iso, {0});
  EXPECT_EQ(levels.back(), (VertexSet{3}));
  const auto hs = hops_sequence(iso, {0});
  EXPECT_EQ(hs.breakpoints, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_THROW(hops_levels(iso, {}), Error);
}

TEST(Baselines, DegreeOrder) {
  const Graph star = make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  EXPECT_EQ(seq(degree_order(star, {2})), (std::vector<VertexId>{2, 0, 1, 3}));
  const Graph cycle = make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
  EXPECT_EQ(seq(degree_order(cycle, {2})), (std::vector<VertexId>{2, 0, 1, 3}));
}

TEST(Baselines, PageRankOrderUniformScores) {
  const Graph g = testing_support::path4();
  PageRankVector pr;
  pr.p.assign(4, 0.25);
  EXPECT_EQ(seq(pagerank_order(g, {3}, pr)), (std::vector<VertexId>{3, 0, 1, 2}));
  pr.p = {0.1, 0.2, 0.4, 0.3};
  EXPECT_EQ(seq(pagerank_order(g, {0}, pr)), (std::vector<VertexId>{0, 2, 3, 1}));
}

TEST(Order, ValidateRejectsBadOrders) {
  VertexOrder o{{0, 1, 1}, 1};
  EXPECT_THROW(o.validate(3), Error);
  VertexOrder p{{1, 0, 2}, 1};
  const VertexSet s{0};
  EXPECT_THROW(p.validate(3, &s), Error);
  EXPECT_NO_THROW(p.validate(3));
}
