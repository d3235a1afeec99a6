#pragma once

#include <vector>

#include "hitlab/hitlab.hpp"

namespace hitlab::testing {

inline WeightedGraph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.push_back({u, v, 1.0});
  return build_graph(n, e);
}

inline WeightedGraph k3() { return complete(3); }

// a - b - c as 0 - 1 - 2
inline WeightedGraph p3() { return build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

inline WeightedGraph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex l = 1; l <= leaves; ++l) e.push_back({0, l, 1.0});
  return build_graph(leaves + 1, e);
}

// Two m-cliques joined by the edge (m - 1, m).
inline WeightedGraph two_cliques(std::size_t m) {
  std::vector<Edge> e;
  for (std::size_t side = 0; side < 2; ++side)
    for (Vertex u = 0; u < m; ++u)
      for (Vertex v = u + 1; v < m; ++v) e.push_back({side * m + u, side * m + v, 1.0});
  e.push_back({m - 1, m, 1.0});
  return build_graph(2 * m, e);
}

inline std::vector<int> labels_for(const std::vector<std::size_t>& sizes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c) labels.insert(labels.end(), sizes[c], static_cast<int>(c));
  return labels;
}

// Unit weights between parts, none inside.
inline WeightedGraph complete_multipartite(const std::vector<std::size_t>& sizes) {
  const auto labels = labels_for(sizes);
  std::vector<Edge> e;
  for (Vertex u = 0; u < labels.size(); ++u)
    for (Vertex v = u + 1; v < labels.size(); ++v)
      if (labels[u] != labels[v]) e.push_back({u, v, 1.0});
  return build_graph(labels.size(), e, labels);
}

// Complete graph with weight p inside communities and q across.
inline WeightedGraph sbm_expectation(const std::vector<std::size_t>& sizes, double p, double q) {
  const auto labels = labels_for(sizes);
  std::vector<Edge> e;
  for (Vertex u = 0; u < labels.size(); ++u)
    for (Vertex v = u + 1; v < labels.size(); ++v) e.push_back({u, v, labels[u] == labels[v] ? p : q});
  return build_graph(labels.size(), e, labels);
}

inline WeightedGraph sbm(std::size_t per_side, double p, double q, std::uint64_t seed) {
  SbmSpec s;
  s.community_sizes = {per_side, per_side};
  s.p = p;
  s.q = q;
  s.seed = seed;
  return sample_sbm(s);
}

// First seed at or after `seed` giving a connected ER graph.
inline WeightedGraph connected_er(std::size_t n, double p, std::uint64_t seed) {
  for (;; ++seed) {
    WeightedGraph g = sample_er(n, p, seed);
    if (is_connected(g)) return g;
  }
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace hitlab::testing
