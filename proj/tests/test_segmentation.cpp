#include <gtest/gtest.h>

#include <random>

#include "nestseg/oracle.hpp"
#include "nestseg/segmentation.hpp"
#include "support.hpp"

using namespace nestseg;

namespace {

std::vector<WeightedPoint> unit_points(std::initializer_list<double> values) {
  std::vector<WeightedPoint> pts;
  for (double v : values) pts.push_back({1.0, v});
  return pts;
}

VertexOrder identity_order(std::size_t n, std::size_t sources) {
  VertexOrder o;
  o.source_size = sources;
  for (VertexId v = 0; v < n; ++v) o.sequence.push_back(v);
  return o;
}

}  // namespace

TEST(Groups, PathExample) {
  const auto groups = build_group_sequence(testing_support::path4(), identity_order(4, 1));
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].pair_count, 1u);
  EXPECT_DOUBLE_EQ(groups[0].density, 1.0);
  EXPECT_EQ(groups[1].pair_count, 2u);
  EXPECT_DOUBLE_EQ(groups[1].density, 0.5);
  EXPECT_DOUBLE_EQ(groups[1].internal_sse, 0.5);
  EXPECT_EQ(groups[2].pair_count, 3u);
  EXPECT_DOUBLE_EQ(groups[2].density, 1.0 / 3.0);
}

TEST(Groups, CompleteGraph) {
  const auto g = testing_support::complete_graph(6);
  for (const auto& p : build_group_sequence(g, identity_order(6, 2))) {
    EXPECT_DOUBLE_EQ(p.density, 1.0);
    EXPECT_DOUBLE_EQ(p.internal_sse, 0.0);
  }
  EXPECT_THROW(build_group_sequence(g, identity_order(6, 0)), Error);
}

TEST(Pav, Examples) {
  const auto blocks = pav_pool(unit_points({3, 1, 2}));
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_DOUBLE_EQ(blocks[0].weight, 1.0);
  EXPECT_DOUBLE_EQ(blocks[0].mean(), 3.0);
  EXPECT_DOUBLE_EQ(blocks[1].weight, 2.0);
  EXPECT_DOUBLE_EQ(blocks[1].mean(), 1.5);
  EXPECT_DOUBLE_EQ(blocks[1].sse, 0.5);

  EXPECT_EQ(pav_pool(unit_points({3, 2, 1})).size(), 3u);

  const auto tie = pav_pool(unit_points({2, 2}));
  ASSERT_EQ(tie.size(), 1u);
  EXPECT_DOUBLE_EQ(tie[0].weight, 2.0);
  EXPECT_DOUBLE_EQ(tie[0].mean(), 2.0);

  EXPECT_THROW(pav_pool(std::vector<WeightedPoint>{{0.0, 1.0}}), Error);
}

TEST(Pav, MatchesExhaustiveFitAndConserves) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto pts = oracle::random_dyadic_points(rng, std::uniform_int_distribution<std::size_t>(1, 12)(rng));
    const auto blocks = pav_pool(pts);
    double weight = 0.0, sum = 0.0, sse = 0.0, in_weight = 0.0, in_sum = 0.0;
    for (const auto& p : pts) in_weight += p.weight, in_sum += p.weight * p.value;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      weight += blocks[b].weight;
      sum += blocks[b].sum;
      sse += blocks[b].sse;
      if (b > 0) {
        EXPECT_LT(blocks[b].mean(), blocks[b - 1].mean());
        EXPECT_EQ(blocks[b].first, blocks[b - 1].last);
      }
    }
    EXPECT_EQ(weight, in_weight);
    EXPECT_EQ(sum, in_sum);
    EXPECT_NEAR(sse, oracle::brute_force_antitonic_fit(pts).sse, 1e-9);
  }
}

TEST(SegmentDp, Examples) {
  const auto blocks = singleton_blocks(unit_points({5, 4, 1}));
  const auto two = segment_dp(blocks, 2);
  EXPECT_NEAR(two.cost, 0.5, 1e-12);
  EXPECT_EQ(two.breakpoints, (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_NEAR(segment_dp(blocks, 3).cost, 0.0, 1e-12);
  // k = 1: total weighted variance around the mean 10/3.
  EXPECT_NEAR(segment_dp(blocks, 1).cost, (25 + 4 + 49) / 9.0, 1e-12);
}

TEST(SegmentDp, Infeasible) {
  const auto blocks = singleton_blocks(unit_points({5, 4, 1}));
  try {
    segment_dp(blocks, 4);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.max_feasible_k(), 3u);
    EXPECT_NE(std::string(e.what()).find("max feasible k = 3"), std::string::npos);
  }
  EXPECT_THROW(segment_dp(singleton_blocks(unit_points({1, 2})), 1), Error);
  EXPECT_FALSE(oracle::brute_force_segmentation(unit_points({1, 2, 3}), 2));
}

TEST(SegmentDp, CentroidBound) {
  const auto blocks = singleton_blocks(unit_points({5, 4, 1}));
  SegmentOptions opt;
  opt.centroid_bound = 4.8;  // {5} alone would violate it
  const auto seg = segment_dp(blocks, 2, opt);
  EXPECT_EQ(seg.breakpoints, (std::vector<std::size_t>{0, 2, 3}));
  opt.centroid_bound = 4.4;  // now {5, 4} is too dense as well
  EXPECT_THROW(segment_dp(blocks, 2, opt), InfeasibleError);
  EXPECT_EQ(segment_dp(blocks, 1, opt).breakpoints, (std::vector<std::size_t>{0, 3}));
}

TEST(SegmentDp, MatchesExhaustive) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(n, 4))(rng);
    const auto pts = oracle::random_decreasing_points(rng, n);
    const double bound = t % 3 == 0 ? pts.front().value - 0.5 : std::numeric_limits<double>::infinity();
    SegmentOptions opt;
    opt.centroid_bound = bound;
    const auto brute = oracle::brute_force_segmentation(pts, k, bound);
    for (auto strategy : {DpStrategy::quadratic, DpStrategy::divide_and_conquer}) {
      opt.strategy = strategy;
      if (!brute) {
        EXPECT_THROW(segment_dp(singleton_blocks(pts), k, opt), InfeasibleError);
        continue;
      }
      const auto seg = segment_dp(singleton_blocks(pts), k, opt);
      EXPECT_NEAR(seg.cost, brute->cost, 1e-9);
    }
  }
}

TEST(SegmentDp, StrategiesAgreeOnLargeInputs) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 5; ++t) {
    const auto pts = oracle::random_decreasing_points(rng, 600);
    const auto blocks = singleton_blocks(pts);
    for (std::size_t k : {1u, 2u, 7u, 40u}) {
      const auto a = segment_dp(blocks, k, {std::numeric_limits<double>::infinity(), DpStrategy::quadratic});
      const auto b =
          segment_dp(blocks, k, {std::numeric_limits<double>::infinity(), DpStrategy::divide_and_conquer});
      EXPECT_NEAR(a.cost, b.cost, 1e-9 * std::max(1.0, a.cost));
    }
  }
}

TEST(Score, MatchesSlotEnumerationOnRandomSequences) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    const Graph g = oracle::random_graph(rng, n, 0.5);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    const auto order = testing_support::random_order(rng, n, VertexSet::all(s));
    const auto cuts = testing_support::random_breakpoints(rng, n, s);
    const auto direct = score_sequence(g, order, cuts);
    const double expected = testing_support::naive_sequence_score(g, order, cuts);
    EXPECT_NEAR(direct.total_score, expected, 1e-9 * std::max(1.0, expected));
    EXPECT_NEAR(reduced_score(build_group_sequence(g, order), s, cuts), expected, 1e-9 * std::max(1.0, expected));
  }
}

TEST(Score, RejectsBadBreakpoints) {
  const Graph g = testing_support::path4();
  const auto order = identity_order(4, 1);
  EXPECT_THROW(score_sequence(g, order, std::vector<std::size_t>{0, 4}), Error);
  EXPECT_THROW(score_sequence(g, order, std::vector<std::size_t>{1, 3}), Error);
  EXPECT_THROW(score_sequence(g, order, std::vector<std::size_t>{1, 3, 3, 4}), Error);
  EXPECT_THROW(score_sequence(g, identity_order(4, 0), std::vector<std::size_t>{0, 1, 4}), Error);
}

TEST(Discover, PathExample) {
  const auto seq = discover(testing_support::path4(), identity_order(4, 1), 3);
  EXPECT_EQ(seq.breakpoints, (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_NEAR(seq.total_score, 0.5 + 4.0 / 9 + 2.0 / 9, 1e-12);
  EXPECT_NEAR(seq.segment_centroids[0], 1.0, 1e-12);
  EXPECT_NEAR(seq.segment_centroids[1], 0.5, 1e-12);
  EXPECT_NEAR(seq.segment_centroids[2], 1.0 / 3, 1e-12);
}

TEST(Discover, SingleCommunity) {
  const Graph g = testing_support::path4();
  const auto order = identity_order(4, 1);
  const auto seq = discover(g, order, 1);
  EXPECT_EQ(seq.breakpoints, (std::vector<std::size_t>{1, 4}));
  EXPECT_NEAR(seq.total_score, testing_support::naive_segment_score(g, {0}, VertexSet::all(4)), 1e-12);
}

TEST(Discover, CompleteGraphScoresZero) {
  const Graph g = testing_support::complete_graph(7, 2.0);
  const auto seq = discover(g, identity_order(7, 1), 1);
  EXPECT_DOUBLE_EQ(seq.total_score, 0.0);
  EXPECT_THROW(discover(g, identity_order(7, 1), 2), InfeasibleError);
}

// Single source: exhaustive search over raw breakpoints (no pooling). Raw
// cuts may split a pooled block and so admit k above the block count; below
// it the optima coincide.
TEST(Discover, MatchesExhaustiveBreakpointSearch) {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 12)(rng);
    const Graph g = oracle::random_graph(rng, n, 0.5, t % 5 == 0);
    const auto order = sort_vertices(g, {0});
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(4, n - 1))(rng);
    const auto groups = build_group_sequence(g, order);
    double internal = 0.0;
    for (const auto& p : groups) internal += p.internal_sse;
    const auto brute = oracle::brute_force_segmentation(as_weighted_points(groups), k);
    if (k > max_feasible_k(g, order)) {
      EXPECT_THROW(discover(g, order, k), InfeasibleError);
      continue;
    }
    ASSERT_TRUE(brute);
    ++compared;
    const auto seq = discover(g, order, k);
    EXPECT_NEAR(seq.total_score, brute->cost + internal, 1e-9 * std::max(1.0, seq.total_score)) << "trial " << t;
    EXPECT_NEAR(score_sequence(g, order, seq.breakpoints).total_score, seq.total_score,
                1e-9 * std::max(1.0, seq.total_score));
  }
  EXPECT_GT(compared, 300);
}

// Several sources: exhaustive search over pooled-block boundaries with the
// first centroid kept below d(S).
TEST(Discover, MatchesBlockEnumerationWithSourceCeiling) {
  std::mt19937_64 rng(37);
  int compared = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 14)(rng);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    const Graph g = oracle::random_graph(rng, n, 0.5, t % 5 == 0);
    const auto order = sort_vertices(g, VertexSet::all(s));
    const auto groups = build_group_sequence(g, order);
    const auto blocks = pav_pool(as_weighted_points(groups));
    if (blocks.size() > 12) continue;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::vector<WeightedPoint> means;
    double fixed = 0.0;
    for (const auto& b : blocks) means.push_back({b.weight, b.mean()}), fixed += b.sse;
    for (const auto& p : groups) fixed += p.internal_sse;
    const auto brute = oracle::brute_force_segmentation(means, k, detail::source_density_bound(g, order));
    if (!brute) {
      EXPECT_THROW(discover(g, order, k), InfeasibleError);
      continue;
    }
    ++compared;
    const auto seq = discover(g, order, k);
    EXPECT_NEAR(seq.total_score, brute->cost + fixed, 1e-9 * std::max(1.0, seq.total_score)) << "trial " << t;
    EXPECT_LT(seq.segment_centroids[0], detail::source_density_bound(g, order));
  }
  EXPECT_GT(compared, 50);
}

TEST(Discover, MonotoneOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 40)(rng);
    const Graph g = oracle::random_graph(rng, n, 0.3);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    if (s >= n) continue;
    const auto order = sort_vertices(g, VertexSet::all(s));
    const std::size_t kmax = max_feasible_k(g, order);
    for (std::size_t k = 1; k <= kmax; ++k) {
      const auto seq = discover(g, order, k);
      for (std::size_t j = 1; j < k; ++j) {
        EXPECT_LT(seq.segment_centroids[j], seq.segment_centroids[j - 1]);
        EXPECT_LT(seq.community_densities[j], seq.community_densities[j - 1]);
      }
    }
    if (kmax > 0) {
      EXPECT_THROW(discover(g, order, kmax + 1), InfeasibleError);
    }
  }
}
