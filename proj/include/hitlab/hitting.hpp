#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"

namespace hitlab {

inline constexpr double kResidualTolerance = 1e-8;

/// values[w] = E[T_{w,v}] in steps; values[target] = 0.
struct HittingProfile {
  Vertex target = 0;
  std::vector<double> values;

  double operator[](Vertex w) const { return values[w]; }
  std::size_t size() const noexcept { return values.size(); }
};

/// max_{w != v} |h_w - 1 - sum_{w'} p(w, w') h_{w'}|.
inline double one_step_residual(const WeightedGraph& g, const HittingProfile& h) {
  double worst = 0.0;
  for (Vertex w = 0; w < g.size(); ++w) {
    if (w == h.target) continue;
    const auto r = g.row(w);
    double acc = 0.0;
    for (Vertex x = 0; x < g.size(); ++x) acc += r[x] * h.values[x];
    worst = std::max(worst, std::abs(h.values[w] - 1.0 - acc / g.strength(w)));
  }
  return worst;
}

/// Exact hitting times to v: solves (I - P_{-v}) h = 1 by dense LU with
/// partial pivoting, with up to two rounds of iterative refinement, and
/// refuses to return unless the one-step residual is within 1e-8.
inline HittingProfile hitting_profile(const WeightedGraph& g, Vertex v) {
  require_vertex(g, v);
  require_connected(g);
  const std::size_t n = g.size();
  HittingProfile out{v, std::vector<double>(n, 0.0)};
  if (n == 1) return out;

  // index k in the reduced system <-> vertex k + (k >= v)
  const auto vertex_of = [v](std::size_t k) { return k < v ? k : k + 1; };
  const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto col = g.row(vertex_of(static_cast<std::size_t>(j)));
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vertex wi = vertex_of(static_cast<std::size_t>(i));
      a(i, j) = -col[wi] / g.strength(wi);
    }
    a(j, j) += 1.0;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-15))
    throw SingularSystem("hitting-time system is numerically singular");

  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd h = lu.solve(rhs);
  for (int round = 0; round < 2; ++round) {
    const Eigen::VectorXd r = rhs - a * h;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-11 * std::max(1.0, h.lpNorm<Eigen::Infinity>()))
      break;
    h += lu.solve(r);
  }
  if (!h.allFinite()) throw SingularSystem("hitting-time solve produced non-finite values");
  for (Eigen::Index k = 0; k < m; ++k) out.values[vertex_of(static_cast<std::size_t>(k))] = h(k);

  const double res = one_step_residual(g, out);
  if (!(res <= kResidualTolerance))
    throw SingularSystem("hitting-time residual " + std::to_string(res) +
                         " exceeds tolerance");
  return out;
}

inline constexpr long kOracleMaxSweeps = 10'000'000;

/// Independent check on hitting_profile: Jacobi fixed-point iteration
/// h <- 1 + P_{-v} h from h = 0 over adjacency lists.
///
/// The sup-norm change d_k contracts by roughly the Perron root gamma of
/// P_{-v}. gamma is estimated as the largest ratio d_k / d_{k-1} over the
/// last eight sweeps, and iteration stops once d_k <= 0.5 * tol * (1 - gamma),
/// which bounds the remaining error by d_k * gamma / (1 - gamma) < tol / 2.
inline HittingProfile hitting_profile_oracle(const WeightedGraph& g, Vertex v, double tol) {
  require_vertex(g, v);
  if (!(tol > 0.0)) throw InvalidArgument("oracle tolerance must be positive");
  require_connected(g);
  const std::size_t n = g.size();

  struct Arc {
    Vertex to;
    double prob;
  };
  std::vector<std::vector<Arc>> arcs(n);
  for (Vertex w = 0; w < n; ++w) {
    if (w == v) continue;
    const auto r = g.row(w);
    for (Vertex x = 0; x < n; ++x)
      if (r[x] > 0.0 && x != v) arcs[w].push_back({x, r[x] / g.strength(w)});
  }

  std::vector<double> h(n, 0.0), next(n, 0.0);
  std::deque<double> ratios;
  double prev_delta = 0.0;
  for (long sweep = 1; sweep <= kOracleMaxSweeps; ++sweep) {
    double delta = 0.0;
    for (Vertex w = 0; w < n; ++w) {
      if (w == v) continue;
      double acc = 1.0;
      for (const Arc& a : arcs[w]) acc += a.prob * h[a.to];
      next[w] = acc;
      delta = std::max(delta, std::abs(acc - h[w]));
    }
    h.swap(next);
    if (delta == 0.0) break;
    if (sweep > 1) {
      ratios.push_back(delta / prev_delta);
      if (ratios.size() > 8) ratios.pop_front();
    }
    prev_delta = delta;
    if (ratios.size() >= 3) {
      const double gamma = *std::max_element(ratios.begin(), ratios.end());
      if (gamma < 1.0 && delta <= 0.5 * tol * (1.0 - gamma)) break;
    }
    if (sweep == kOracleMaxSweeps)
      throw IterationLimit("value iteration did not converge within the sweep cap");
  }
  return HittingProfile{v, std::move(h)};
}

/// Return time to v: 1 / mu_v, cross-checked against the profile through
/// 1 + sum_w p(v, w) h_w.
struct ReturnTime {
  double value = 0.0;        // 1 / mu_v
  double via_profile = 0.0;  // 1 + sum_w p(v, w) h_w
  double gap = 0.0;
};

inline ReturnTime return_time(const WeightedGraph& g, const HittingProfile& h) {
  const Vertex v = h.target;
  ReturnTime out;
  out.value = g.total_strength() / g.strength(v);
  const auto r = g.row(v);
  double acc = 0.0;
  for (Vertex w = 0; w < g.size(); ++w) acc += r[w] * h.values[w];
  out.via_profile = 1.0 + acc / g.strength(v);
  out.gap = std::abs(out.via_profile - out.value);
  if (!(out.gap <= kResidualTolerance))
    throw Error("return-time identity violated by " + std::to_string(out.gap));
  return out;
}

inline ReturnTime return_time(const WeightedGraph& g, Vertex v) {
  return return_time(g, hitting_profile(g, v));
}

}  // namespace hitlab
