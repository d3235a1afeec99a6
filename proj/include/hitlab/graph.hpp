#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hitlab/error.hpp"

namespace hitlab {

using Vertex = std::size_t;

// Dense storage bound; beyond this every constructor refuses.
inline constexpr std::size_t kMaxVertices = 8192;

// Tolerance for probability vectors summing to one.
inline constexpr double kProbTolerance = 1e-12;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 1.0;
};

namespace detail {

// Neumaier-compensated sum; rows of up to 8192 entries stay well inside
// kProbTolerance.
template <typename Range>
double compensated_sum(const Range& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

/// Probability vector over vertices or partition blocks. Construction checks
/// non-negativity and normalisation to kProbTolerance.
class Distribution {
 public:
  Distribution() = default;

  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw InvalidArgument("distribution entry is negative or not finite");
    }
    const double total = detail::compensated_sum(probs_);
    if (std::abs(total - 1.0) > kProbTolerance)
      throw InvalidArgument("distribution does not sum to 1 (sum = " +
                            std::to_string(total) + ")");
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  auto begin() const noexcept { return probs_.begin(); }
  auto end() const noexcept { return probs_.end(); }

 private:
  std::vector<double> probs_;
};

/// Undirected graph with symmetric non-negative weights c(w, w') stored
/// densely. Immutable once built; all queries are const and thread-safe.
/// Self-loops c(w, w) are allowed and count once towards the strength c_w.
class WeightedGraph {
 public:
  std::size_t size() const noexcept { return n_; }

  double weight(Vertex u, Vertex v) const { return weights_[u * n_ + v]; }

  // Row u of the weight matrix (equal to column u by symmetry).
  std::span<const double> row(Vertex u) const {
    return {weights_.data() + u * n_, n_};
  }

  double strength(Vertex w) const { return strength_[w]; }
  const std::vector<double>& strengths() const noexcept { return strength_; }
  double total_strength() const noexcept { return total_strength_; }

  bool adjacent(Vertex u, Vertex v) const { return weight(u, v) > 0.0; }

  // Number of positive-weight neighbours, self excluded.
  std::size_t degree(Vertex w) const {
    std::size_t d = 0;
    for (Vertex x = 0; x < n_; ++x)
      if (x != w && weights_[w * n_ + x] > 0.0) ++d;
    return d;
  }

  // Positive-weight neighbours of w in increasing order (self-loop included).
  std::vector<Vertex> neighbors(Vertex w) const {
    std::vector<Vertex> out;
    for (Vertex x = 0; x < n_; ++x)
      if (weights_[w * n_ + x] > 0.0) out.push_back(x);
    return out;
  }

  // Unordered pairs {u, v} with positive weight, self-loops included.
  std::size_t edge_count() const {
    std::size_t m = 0;
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = u; v < n_; ++v)
        if (weights_[u * n_ + v] > 0.0) ++m;
    return m;
  }

  // True when every weight is 0 or 1 and there are no self-loops.
  bool unit_weights() const {
    for (Vertex u = 0; u < n_; ++u) {
      if (weights_[u * n_ + u] != 0.0) return false;
      for (Vertex v = u + 1; v < n_; ++v) {
        const double c = weights_[u * n_ + v];
        if (c != 0.0 && c != 1.0) return false;
      }
    }
    return true;
  }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::optional<std::vector<int>>& labels() const noexcept {
    return labels_;
  }
  int label(Vertex w) const { return labels_.value().at(w); }

  // Positive-weight edges, u <= v, lexicographic.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = u; v < n_; ++v)
        if (weights_[u * n_ + v] > 0.0) out.push_back({u, v, weights_[u * n_ + v]});
    return out;
  }

  friend WeightedGraph build_graph(std::size_t n, std::span<const Edge> edges,
                                   std::optional<std::vector<int>> labels);

 private:
  WeightedGraph() = default;

  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<double> strength_;
  double total_strength_ = 0.0;
  std::optional<std::vector<int>> labels_;
};

/// Builds a graph from an edge list; duplicate pairs accumulate.
inline WeightedGraph build_graph(std::size_t n, std::span<const Edge> edges,
                                 std::optional<std::vector<int>> labels = std::nullopt) {
  if (n == 0) throw InvalidArgument("graph must have at least one vertex");
  if (n > kMaxVertices)
    throw InvalidArgument("graph size " + std::to_string(n) +
                          " exceeds the dense limit of " +
                          std::to_string(kMaxVertices) + " vertices");
  if (labels && labels->size() != n)
    throw InvalidArgument("label count does not match vertex count");

  WeightedGraph g;
  g.n_ = n;
  g.weights_.assign(n * n, 0.0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw InvalidArgument("edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ") has an endpoint outside [0, " +
                            std::to_string(n) + ")");
    if (!std::isfinite(e.weight)) throw InvalidArgument("edge weight is not finite");
    if (e.weight < 0.0)
      throw InvalidArgument("negative weight on edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ")");
    g.weights_[e.u * n + e.v] += e.weight;
    if (e.u != e.v) g.weights_[e.v * n + e.u] += e.weight;
  }
  g.strength_.resize(n);
  for (Vertex w = 0; w < n; ++w) g.strength_[w] = detail::compensated_sum(g.row(w));
  g.total_strength_ = detail::compensated_sum(g.strength_);
  g.labels_ = std::move(labels);
  return g;
}

inline WeightedGraph build_graph(std::size_t n, const std::vector<Edge>& edges,
                                 std::optional<std::vector<int>> labels = std::nullopt) {
  return build_graph(n, std::span<const Edge>(edges), std::move(labels));
}

/// Breadth-first search over positive-weight edges.
inline bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<char> seen(n, 0);
  std::queue<Vertex> frontier;
  seen[0] = 1;
  frontier.push(0);
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop();
    const auto r = g.row(u);
    for (Vertex x = 0; x < n; ++x) {
      if (r[x] > 0.0 && !seen[x]) {
        seen[x] = 1;
        ++reached;
        frontier.push(x);
      }
    }
  }
  return reached == n;
}

inline void require_connected(const WeightedGraph& g) {
  if (!is_connected(g)) throw Disconnected("graph is not connected");
}

inline void require_vertex(const WeightedGraph& g, Vertex v) {
  if (v >= g.size())
    throw InvalidArgument("vertex " + std::to_string(v) + " out of range [0, " +
                          std::to_string(g.size()) + ")");
}

/// One-step law p(w, .) = c(w, .) / c_w.
inline Distribution transition_row(const WeightedGraph& g, Vertex w) {
  require_vertex(g, w);
  const double cw = g.strength(w);
  if (!(cw > 0.0))
    throw InvalidArgument("vertex " + std::to_string(w) + " is isolated");
  const auto r = g.row(w);
  std::vector<double> probs(r.begin(), r.end());
  for (double& p : probs) p /= cw;
  return Distribution(std::move(probs));
}

/// mu_w = c_w / sum c. Verifies ||mu P - mu||_inf <= 1e-12 before returning.
inline Distribution stationary(const WeightedGraph& g) {
  require_connected(g);
  const std::size_t n = g.size();
  std::vector<double> mu(n);
  for (Vertex w = 0; w < n; ++w) mu[w] = g.strength(w) / g.total_strength();

  // (mu P)_x = sum_w c(w, x) / sum c, the column sums of the weights.
  for (Vertex x = 0; x < n; ++x) {
    const auto col = g.row(x);
    double acc = 0.0;
    for (Vertex w = 0; w < n; ++w) acc += col[w] / g.total_strength();
    if (std::abs(acc - mu[x]) > 1e-12)
      throw Error("stationary check failed at vertex " + std::to_string(x));
  }
  return Distribution(std::move(mu));
}

inline double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InvalidArgument("tv_distance: distributions have different lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

inline double tv_distance(const Distribution& a, const Distribution& b) {
  return tv_distance(std::span<const double>(a.probs()), std::span<const double>(b.probs()));
}

}  // namespace hitlab
