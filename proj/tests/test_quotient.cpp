#include <gtest/gtest.h>

#include "support.hpp"

using namespace hitlab;
using namespace hitlab::testing;

namespace {

// {v}, the rest of v's community, then each other community.
Partition community_partition(const WeightedGraph& g, Vertex v) {
  std::map<int, std::vector<Vertex>> by_label;
  std::vector<Vertex> own;
  for (Vertex w = 0; w < g.size(); ++w) {
    if (w == v) continue;
    if (g.label(w) == g.label(v))
      own.push_back(w);
    else
      by_label[g.label(w)].push_back(w);
  }
  std::vector<std::vector<Vertex>> blocks{{v}};
  if (!own.empty()) blocks.push_back(own);
  for (auto& [l, b] : by_label) blocks.push_back(b);
  return make_partition(g.size(), blocks);
}

}  // namespace

TEST(Partition, TriangleIsDegenerate) {
  try {
    canonical_partition(k3(), 0, false);
    FAIL() << "expected a degenerate partition";
  } catch (const Degenerate& e) {
    EXPECT_NE(std::string(e.what()).find("non-adjacent"), std::string::npos);
  }
}

TEST(Partition, PathBlocks) {
  const Partition P = canonical_partition(p3(), 0, false);
  ASSERT_EQ(P.block_count(), 3u);
  EXPECT_EQ(P.blocks[0], std::vector<Vertex>{0});
  EXPECT_EQ(P.blocks[1], std::vector<Vertex>{1});
  EXPECT_EQ(P.blocks[2], std::vector<Vertex>{2});
}

TEST(Partition, Validation) {
  EXPECT_THROW(make_partition(3, {{0, 1}, {2}}), InvalidArgument);
  EXPECT_THROW(make_partition(3, {{0}, {1}}), InvalidArgument);
  EXPECT_THROW(make_partition(3, {{0}, {1, 2}, {2}}), InvalidArgument);
  EXPECT_THROW(make_partition(3, {{0}, {1, 2}, {}}), Degenerate);
  EXPECT_THROW(canonical_partition(p3(), 0, true), InvalidArgument);
}

TEST(Partition, SbmCanonicalBlocks) {
  const WeightedGraph g = sbm(500, 0.8, 0.2, 1);
  const Partition P = canonical_partition(g, 0, true);
  ASSERT_EQ(P.block_count(), 5u);
  EXPECT_EQ(P.info[1].name, "same-adj");
  EXPECT_EQ(P.info[2].name, "diff-adj");
  EXPECT_EQ(P.info[3].name, "same-nonadj");
  EXPECT_EQ(P.info[4].name, "diff-nonadj");
  EXPECT_LE(std::abs(P.blocks[1].size() - 0.8 * 499), chernoff_radius(499, 0.8, 4));
  EXPECT_LE(std::abs(P.blocks[2].size() - 0.2 * 500), chernoff_radius(500, 0.2, 4));
}

TEST(Partition, ThreeCommunitiesGiveSevenBlocks) {
  SbmSpec s;
  s.community_sizes = {30, 30, 30};
  s.p = 0.7;
  s.q = 0.2;
  s.seed = 2;
  const WeightedGraph g = sample_sbm(s);
  const Partition P = canonical_partition(g, 40, true);
  ASSERT_EQ(P.block_count(), 7u);
  EXPECT_EQ(P.info[1].name, "same-adj");
  EXPECT_EQ(P.info[2].name, "comm0-adj");
  EXPECT_EQ(P.info[3].name, "comm2-adj");
  EXPECT_EQ(P.info[4].name, "same-nonadj");
  for (Vertex w : P.blocks[2]) EXPECT_EQ(g.label(w), 0);
}

TEST(Quotient, TriangleAggregation) {
  const WeightedGraph g = k3();
  const Partition P = make_partition(3, {{0}, {1, 2}});
  const QuotientChain Q = build_quotient(g, P);
  EXPECT_DOUBLE_EQ(Q.C(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(Q.C(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(Q.Ci[1], 4.0);
  EXPECT_DOUBLE_EQ(Q.q(1, 0), 0.5);
  EXPECT_NEAR(quotient_hitting(Q)[1], 2.0, 1e-12);
  EXPECT_EQ(epsilon(g, P, Q), 0.0);
}

TEST(Quotient, IdentityPartitionIsTheWalk) {
  const WeightedGraph g = p3();
  const Partition P = identity_partition(3, 0);
  const QuotientChain Q = build_quotient(g, P);
  for (Vertex a = 0; a < 3; ++a)
    for (Vertex b = 0; b < 3; ++b)
      EXPECT_NEAR(Q.q(static_cast<Eigen::Index>(P.gamma[a]), static_cast<Eigen::Index>(P.gamma[b])),
                  g.weight(a, b) / g.strength(a), 1e-15);
  const auto T = quotient_hitting(Q);
  EXPECT_NEAR(T[P.gamma[1]], 3.0, 1e-12);
  EXPECT_NEAR(T[P.gamma[2]], 4.0, 1e-12);
  EXPECT_EQ(epsilon(g, P), 0.0);
}

TEST(Quotient, GeometricWait) {
  for (double beta : {0.5, 0.1, 0.03}) {
    const WeightedGraph g = build_graph(2, {{0, 1, beta}, {1, 1, 1.0 - beta}});
    const QuotientChain Q = build_quotient(g, identity_partition(2, 0));
    EXPECT_NEAR(Q.q(1, 0), beta, 1e-15);
    EXPECT_NEAR(quotient_hitting(Q)[1], 1.0 / beta, 1e-9);
    EXPECT_NEAR(hitting_profile(g, 0)[1], 1.0 / beta, 1e-9);
  }
}

TEST(Quotient, BlockMassesAreStationary) {
  const WeightedGraph g = sbm(60, 0.4, 0.1, 3);
  const Partition P = canonical_partition(g, 7, true);
  const QuotientChain Q = build_quotient(g, P);
  const Distribution mu = stationary(g);
  for (std::size_t i = 0; i < P.block_count(); ++i) {
    double m = 0;
    for (Vertex w : P.blocks[i]) m += mu[w];
    EXPECT_NEAR(Q.nu[i], m, 1e-12);
  }
  EXPECT_NEAR((Q.C - Q.C.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(Quotient, SbmEpsilonScale) {
  const WeightedGraph g = sbm(500, 0.8, 0.2, 1);
  const double eps = epsilon(g, canonical_partition(g, 0, true));
  EXPECT_LE(eps, 5.0 * std::sqrt(std::log(1000.0) / 1000.0));
}

TEST(Quotient, ExactLumpability) {
  std::vector<WeightedGraph> graphs{complete_multipartite({3, 5, 4}), complete_multipartite({6, 6}),
                                    sbm_expectation({5, 7}, 0.8, 0.2),
                                    sbm_expectation({4, 4, 6}, 0.5, 0.05)};
  for (const WeightedGraph& g : graphs) {
    for (Vertex v : {Vertex{0}, Vertex{g.size() - 1}}) {
      const Partition P = community_partition(g, v);
      const QuotientChain Q = build_quotient(g, P);
      EXPECT_EQ(epsilon(g, P, Q), 0.0);
      const auto T = quotient_hitting(Q);
      const HittingProfile h = hitting_profile(g, v);
      for (Vertex w = 0; w < g.size(); ++w) EXPECT_NEAR(h[w], T[P.gamma[w]], 1e-8);
    }
  }
}

TEST(Quotient, EpsilonInfinityAndZeroConventions) {
  // star, blocks {leaf 1}, {centre}, {other leaves}: leaves never step to
  // each other, centre always does.
  const WeightedGraph g = star(3);
  const Partition P = make_partition(4, {{1}, {0}, {2, 3}});
  EXPECT_EQ(epsilon(g, P), 0.0);
  // path of four, blocks {0}, {1, 3}, {2}: vertex 3 never steps to block 0.
  const WeightedGraph p4 = build_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  EXPECT_TRUE(std::isinf(epsilon(p4, make_partition(4, {{0}, {1, 3}, {2}}))));
}

TEST(Quotient, ReducibleChainIsDegenerate) {
  // blocks {0}, {1}, {2}: a zero-weight link leaves block {2} stranded
  const WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {2, 2, 1.0}});
  EXPECT_THROW(quotient_hitting(build_quotient(g, identity_partition(3, 0))), Degenerate);
}

TEST(Quotient, ProjectionIdentitiesSweep) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20; ++seed) {
    const WeightedGraph g = seed % 2 ? sbm(30 + seed, 0.5, 0.1, seed) : connected_er(50 + seed, 0.15, seed);
    if (!is_connected(g)) continue;
    const ProjectionReport r = projection_identity_check(g, canonical_partition(g, 0, g.has_labels()));
    EXPECT_TRUE(r.all_pass()) << "seed " << seed;
    EXPECT_LE(r.stationary_error, 1e-12);
    EXPECT_LE(r.pair_error, 1e-12);
    EXPECT_LE(r.tv_quotient, r.tv_full + 1e-12);
    ++checked;
  }
}

TEST(Quotient, ProjectionIdentityPartitionIsTight) {
  const ProjectionReport r = projection_identity_check(p3(), identity_partition(3, 2));
  EXPECT_TRUE(r.all_pass());
  EXPECT_NEAR(r.tv_quotient, r.tv_full, 1e-15);
}

TEST(Quotient, SandwichHolds) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const WeightedGraph g = sbm(40, 0.6, 0.2, seed);
    if (!is_connected(g)) continue;
    const Partition P = canonical_partition(g, 1, true);
    EXPECT_LE(sandwich_violation(g, P, build_quotient(g, P)), 1e-15);
  }
}

TEST(Quotient, TwoStepLawDoesNotLump) {
  // blocks {0}, {1, 2}, {3} on the path 0 - 1 - 2 - 3: from block 1 the
  // stationary one-step law matches the quotient, yet the law of the block
  // two steps ahead, given the current block, does not.
  const WeightedGraph g = build_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  const Partition P = make_partition(4, {{0}, {1, 2}, {3}});
  const QuotientChain Q = build_quotient(g, P);
  const Distribution mu = stationary(g);
  Eigen::MatrixXd Pm(4, 4);
  for (Vertex a = 0; a < 4; ++a)
    for (Vertex b = 0; b < 4; ++b) Pm(a, b) = g.weight(a, b) / g.strength(a);
  const Eigen::MatrixXd P2 = Pm * Pm;
  const Eigen::MatrixXd Q2 = Q.q * Q.q;
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double flow = 0.0, mass = 0.0;
      for (Vertex w : P.blocks[i]) {
        mass += mu[w];
        for (Vertex x : P.blocks[j]) flow += mu[w] * P2(w, x);
      }
      worst = std::max(worst, std::abs(flow / mass - Q2(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j))));
    }
  EXPECT_GT(worst, 1e-3);
  EXPECT_TRUE(projection_identity_check(g, P).all_pass());
}
