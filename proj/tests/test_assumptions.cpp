#include <gtest/gtest.h>

#include "support.hpp"

using namespace hitlab;
using namespace hitlab::testing;

TEST(Lambda, Examples) {
  for (std::size_t n : {3, 6, 25}) EXPECT_NEAR(lambda_exact(complete(n)), 1.0 / n, 1e-14);
  EXPECT_NEAR(lambda_exact(p3()), 0.5, 1e-15);
}

TEST(Lambda, TwoCliques) {
  // A clique vertex off the bridge steps uniformly inside its own clique and
  // misses the other half of the stationary mass:
  // 1/2 (19/762 + 18 * 401/14478 + 382/14478 + 1/2).
  const double expect = 0.5 * (19.0 / 762 + 7600.0 / 14478 + 0.5);
  EXPECT_NEAR(lambda_exact(two_cliques(20)), expect, 1e-14);
  EXPECT_NEAR(expect, 0.52493438320209973, 1e-15);
}

TEST(KConstants, Examples) {
  const WeightedGraph t = k3();
  const Partition Pt = make_partition(3, {{0}, {1, 2}});
  const KConstants kt = k_constants(t, 0, build_quotient(t, Pt));
  EXPECT_NEAR(kt.K1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(kt.K2, 1.5, 1e-12);
  const WeightedGraph p = p3();
  const KConstants kp = k_constants(p, 2, build_quotient(p, identity_partition(3, 2)));
  EXPECT_NEAR(kp.K1, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(kp.K2, 1.5, 1e-12);
}

TEST(KConstants, Sbm) {
  const WeightedGraph g = sbm(500, 0.8, 0.2, 1);
  const Partition P = canonical_partition(g, 0, true);
  const KConstants k = k_constants(g, 0, build_quotient(g, P));
  // max_w h_w is about 2|E| / deg(v), i.e. about |V|
  EXPECT_NEAR(k.K1, 1.0, 0.1);
  EXPECT_NEAR(k.K2, 2.0, 0.3);
  const HittingProfile h = hitting_profile(g, 0);
  EXPECT_GE(k.K1 * 1000 + 1e-9, *std::max_element(h.values.begin(), h.values.end()));
}

TEST(Lemma, CompleteGraph) {
  for (std::size_t n : {4, 10, 30}) {
    const LemmaBounds L = degree_lemma_bounds(complete(n), 0);
    const double nd = static_cast<double>(n);
    EXPECT_TRUE(L.applicable);
    EXPECT_NEAR(L.D, (nd - 1) / nd, 1e-15);
    EXPECT_NEAR(L.delta, 0.0, 1e-15);
    EXPECT_NEAR(L.alpha, (nd - 2) / (nd - 1), 1e-15);
    EXPECT_NEAR(L.K2_bound, nd / (nd - 1), 1e-12);
    EXPECT_NEAR(L.lambda_bound, 1.0 / nd, 1e-12);
  }
}

TEST(Lemma, PathIsInapplicable) {
  const LemmaBounds L = degree_lemma_bounds(p3(), 0);
  EXPECT_EQ(L.alpha, 0.0);
  EXPECT_FALSE(L.applicable);
  EXPECT_FALSE(L.reason.empty());
}

TEST(Lemma, WeightedIsInapplicable) {
  EXPECT_FALSE(degree_lemma_bounds(sbm_expectation({3, 3}, 0.7, 0.2), 0).applicable);
}

TEST(Lemma, Sbm) {
  const LemmaBounds L = degree_lemma_bounds(sbm(500, 0.8, 0.2, 1), 0);
  EXPECT_TRUE(L.applicable);
  EXPECT_GE(L.alpha, 0.15);
  EXPECT_NEAR(L.D, 0.5, 0.05);
}

TEST(Lemma, BoundsDominateExactValues) {
  const std::vector<double> grid{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int checked = 0;
  for (std::size_t i = 0; checked < 20; ++i) {
    const double p = grid[i % grid.size()], q = grid[(i * 3 + 1) % grid.size()];
    const WeightedGraph g = sbm(60, p, q, 100 + i);
    const LemmaBounds L = degree_lemma_bounds(g, 0);
    if (!L.applicable || !L.hypothesis_ok) continue;
    const Partition P = canonical_partition(g, 0, true);
    const KConstants k = k_constants(g, 0, build_quotient(g, P));
    EXPECT_LE(k.K1, L.K1_bound + 1e-9) << p << " " << q;
    EXPECT_LE(k.K2, L.K2_bound + 1e-9) << p << " " << q;
    EXPECT_LE(lambda_exact(g), L.lambda_bound + 1e-9) << p << " " << q;
    ++checked;
  }
}

TEST(TheoremBound, Values) {
  EXPECT_EQ(theorem_bound(0.0, 2, 2, 0.5, 1000), 0.0);
  EXPECT_NEAR(theorem_bound(0.01, 2, 2, 0.5, 1000), 193.34777416607727, 1e-9);
  EXPECT_TRUE(std::isinf(theorem_bound(std::numeric_limits<double>::infinity(), 2, 2, 0.5, 1000)));
  EXPECT_THROW(theorem_bound(0.01, 2, 2, 1.0, 1000), Degenerate);
  EXPECT_THROW(theorem_bound(-0.1, 2, 2, 0.5, 1000), InvalidArgument);
  EXPECT_TRUE(std::isfinite(theorem_bound(0.01, 2, 2, 0.0, 1000)));
}

TEST(TheoremBound, IncreasingInEpsilon) {
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double b = theorem_bound(1e-4 * i, 2, 2, 0.5, 1000);
    EXPECT_GE(b, 0.0);
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(TheoremBound, BlowsUpAsLambdaToOne) {
  double prev = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double b = theorem_bound(0.01, 2, 2, 1.0 - gap, 1000);
    EXPECT_GT(b, prev);
    prev = b;
  }
  EXPECT_GT(prev, 1e9);
}

TEST(Assess, RealizedGapWithinBound) {
  // expected-weight SBM graphs with 1% multiplicative jitter: nearly lumpable
  std::vector<std::pair<WeightedGraph, Partition>> cases;
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    const WeightedGraph base = sbm_expectation({12, 9}, 0.8, 0.2);
    std::vector<Edge> e;
    for (const Edge& x : base.edges()) e.push_back({x.u, x.v, x.weight * (1.0 + 0.01 * rng.uniform())});
    WeightedGraph g = build_graph(21, e, *base.labels());
    std::vector<Vertex> own, other;
    for (Vertex w = 1; w < 21; ++w) (w < 12 ? own : other).push_back(w);
    Partition P = make_partition(21, {{0}, own, other});
    cases.emplace_back(std::move(g), std::move(P));
  }
  const WeightedGraph m = complete_multipartite({5, 7, 6});
  cases.emplace_back(m, make_partition(18, {{0}, {1, 2, 3, 4}, {5, 6, 7, 8, 9, 10, 11},
                                            {12, 13, 14, 15, 16, 17}}));
  for (const auto& [g, P] : cases) {
    const AssumptionReport r = assess(g, 0, P);
    EXPECT_TRUE(r.assumptions_hold);
    EXPECT_LT(r.epsilon, 0.05);
    EXPECT_TRUE(std::isfinite(r.theorem_bound));
    EXPECT_LE(r.realized_gap, r.theorem_bound + 1e-8);
    EXPECT_LE(r.realized_gap, r.trivial_bound);
    EXPECT_EQ(r.effective_bound, std::min(r.theorem_bound, r.trivial_bound));
  }
}
