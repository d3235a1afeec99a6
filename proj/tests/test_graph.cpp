#include <gtest/gtest.h>

#include "support.hpp"

using namespace hitlab;
using namespace hitlab::testing;

TEST(Graph, TriangleStrengths) {
  const WeightedGraph g = build_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  for (Vertex w = 0; w < 3; ++w) EXPECT_DOUBLE_EQ(g.strength(w), 2.0);
  EXPECT_DOUBLE_EQ(g.total_strength(), 6.0);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.unit_weights());
}

TEST(Graph, PathStrengths) {
  const WeightedGraph g = p3();
  EXPECT_DOUBLE_EQ(g.strength(0), 1.0);
  EXPECT_DOUBLE_EQ(g.strength(1), 2.0);
  EXPECT_DOUBLE_EQ(g.strength(2), 1.0);
}

TEST(Graph, RejectsBadInput) {
  EXPECT_THROW(build_graph(2, {{0, 1, -1.0}}), InvalidArgument);
  EXPECT_THROW(build_graph(2, {{0, 2, 1.0}}), InvalidArgument);
  EXPECT_THROW(build_graph(0, std::vector<Edge>{}), InvalidArgument);
  EXPECT_THROW(build_graph(2, {{0, 1, std::nan("")}}), InvalidArgument);
  EXPECT_THROW(build_graph(kMaxVertices + 1, std::vector<Edge>{}), InvalidArgument);
  EXPECT_THROW(build_graph(2, {{0, 1, 1.0}}, std::vector<int>{0}), InvalidArgument);
}

TEST(Graph, SymmetricStorageAndDuplicates) {
  const WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {1, 0, 0.5}, {2, 2, 3.0}});
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 1.5);
  EXPECT_DOUBLE_EQ(g.weight(1, 0), 1.5);
  EXPECT_DOUBLE_EQ(g.weight(2, 2), 3.0);
  EXPECT_FALSE(g.unit_weights());
}

TEST(Graph, Connectivity) {
  EXPECT_TRUE(is_connected(p3()));
  const WeightedGraph split = build_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_FALSE(is_connected(split));
  EXPECT_THROW(require_connected(split), Disconnected);
  EXPECT_THROW(hitting_profile(split, 0), Disconnected);
}

TEST(Graph, TransitionRows) {
  const auto t = transition_row(k3(), 0);
  EXPECT_DOUBLE_EQ(t[0], 0.0);
  EXPECT_DOUBLE_EQ(t[1], 0.5);
  EXPECT_DOUBLE_EQ(t[2], 0.5);
  const auto c = transition_row(p3(), 1);
  EXPECT_DOUBLE_EQ(c[0], 0.5);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_DOUBLE_EQ(c[2], 0.5);
  const auto l = transition_row(p3(), 0);
  EXPECT_DOUBLE_EQ(l[1], 1.0);
}

TEST(Graph, StationaryExamples) {
  const auto mp = stationary(p3());
  EXPECT_NEAR(mp[0], 0.25, 1e-15);
  EXPECT_NEAR(mp[1], 0.5, 1e-15);
  EXPECT_NEAR(mp[2], 0.25, 1e-15);
  const auto mk = stationary(k3());
  for (double x : mk) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  const auto ms = stationary(star(3));
  EXPECT_NEAR(ms[0], 0.5, 1e-15);
  for (Vertex w = 1; w < 4; ++w) EXPECT_NEAR(ms[w], 1.0 / 6.0, 1e-15);
}

TEST(Graph, StationaryIsInvariant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const WeightedGraph g = connected_er(60, 0.15, seed * 17);
    const auto mu = stationary(g);
    double worst = 0.0;
    for (Vertex x = 0; x < g.size(); ++x) {
      double flow = 0.0;
      for (Vertex w = 0; w < g.size(); ++w) flow += mu[w] * g.weight(w, x) / g.strength(w);
      worst = std::max(worst, std::abs(flow - mu[x]));
    }
    EXPECT_LE(worst, 1e-12);
  }
}

TEST(Graph, TvExamples) {
  const std::vector<double> a{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(tv_distance(a, a), 0.0);
  const std::vector<double> e0{1, 0}, e1{0, 1};
  EXPECT_DOUBLE_EQ(tv_distance(e0, e1), 1.0);
  const std::vector<double> u{1.0 / 3, 1.0 / 3, 1.0 / 3}, d{1, 0, 0};
  EXPECT_NEAR(tv_distance(u, d), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(tv_distance(std::vector<double>{1.0}, e0), InvalidArgument);
}

TEST(Graph, TvIsAMetric) {
  Rng rng(3);
  const auto draw = [&] {
    std::vector<double> x(6);
    double s = 0;
    for (double& v : x) s += (v = rng.uniform());
    for (double& v : x) v /= s;
    return x;
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = draw(), b = draw(), c = draw();
    EXPECT_NEAR(tv_distance(a, b), tv_distance(b, a), 1e-12);
    EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    EXPECT_GT(tv_distance(a, b), 0.0);
    EXPECT_NEAR(tv_distance(a, a), 0.0, 1e-12);
  }
}

TEST(Graph, DistributionValidates) {
  EXPECT_THROW(Distribution({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(Distribution({-0.1, 1.1}), InvalidArgument);
  EXPECT_NO_THROW(Distribution({0.25, 0.75}));
}

TEST(Graph, EdgesRoundTripThroughJson) {
  const WeightedGraph g = sbm(20, 0.5, 0.1, 4);
  const WeightedGraph back = graph_from_json(graph_to_json(g));
  EXPECT_EQ(graph_to_json(back).dump(), graph_to_json(g).dump());
  EXPECT_EQ(*back.labels(), *g.labels());
}

TEST(Graph, CsvEdgeList) {
  std::istringstream in("u,v,weight\n0,1,1\n1,2,2.5\n");
  const WeightedGraph g = graph_from_csv(in);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.weight(2, 1), 2.5);
  std::istringstream bad("u,v,weight\n0,x,1\n");
  EXPECT_THROW(graph_from_csv(bad), InvalidArgument);
  std::istringstream header("a,b\n0,1\n");
  EXPECT_THROW(graph_from_csv(header), InvalidArgument);
}
