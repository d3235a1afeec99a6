#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/rng.hpp"

namespace hitlab {

// Edge draws for both samplers happen in lexicographic pair order
// (0,1), (0,2), ..., (1,2), ... with one Rng::uniform() per pair from
// Rng(seed); a pair is kept when the draw is below its probability.

inline void require_open_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0))
    throw InvalidArgument(std::string(name) + " must lie strictly inside (0, 1)");
}

struct SbmSpec {
  std::vector<std::size_t> community_sizes;
  double p = 0.5;  // within-community edge probability
  double q = 0.5;  // across-community edge probability
  std::uint64_t seed = 0;

  std::size_t total_size() const {
    return std::accumulate(community_sizes.begin(), community_sizes.end(), std::size_t{0});
  }

  void validate() const {
    if (community_sizes.empty()) throw InvalidArgument("SBM needs at least one community");
    for (std::size_t s : community_sizes)
      if (s == 0) throw InvalidArgument("SBM community sizes must be positive");
    if (total_size() < 2) throw InvalidArgument("SBM needs at least two vertices");
    require_open_probability(p, "p");
    require_open_probability(q, "q");
  }
};

inline WeightedGraph sample_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("Erdos-Renyi graph needs n >= 2");
  require_open_probability(p, "p");
  if (n > kMaxVertices) throw InvalidArgument("graph size exceeds the dense limit");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * (n - 1) / 2 * 1.1) + 16);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.push_back({u, v, 1.0});
  return build_graph(n, edges);
}

/// Communities occupy consecutive vertex ranges in the order given; labels
/// record the community index.
inline WeightedGraph sample_sbm(const SbmSpec& spec) {
  spec.validate();
  const std::size_t n = spec.total_size();
  if (n > kMaxVertices) throw InvalidArgument("graph size exceeds the dense limit");
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < spec.community_sizes.size(); ++c)
    labels.insert(labels.end(), spec.community_sizes[c], static_cast<int>(c));

  Rng rng(spec.seed);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const double r = labels[u] == labels[v] ? spec.p : spec.q;
      if (rng.uniform() < r) edges.push_back({u, v, 1.0});
    }
  return build_graph(n, edges, std::move(labels));
}

/// Deviation scale sqrt(3 c N r log N) (natural log) within which a
/// Binomial(N, r) variable stays with probability at least 1 - N^-c.
inline double chernoff_radius(double trials, double r, double c) {
  if (!(trials >= 2.0)) throw InvalidArgument("chernoff_radius needs N >= 2");
  require_open_probability(r, "r");
  if (!(c > 0.0)) throw InvalidArgument("chernoff_radius needs c > 0");
  return std::sqrt(3.0 * c * trials * r * std::log(trials));
}

}  // namespace hitlab
