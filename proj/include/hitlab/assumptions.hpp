#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/quotient.hpp"

namespace hitlab {

/// max_w d_TV(p(w, .), mu): the worst one-step distance to stationarity.
inline double lambda_exact(const WeightedGraph& g) {
  const Distribution mu = stationary(g);
  const std::size_t n = g.size();
  std::vector<double> per_row(n, 0.0);
  parallel_for(n, [&](std::size_t w) {
    const double cw = g.strength(w);
    const auto r = g.row(w);
    double acc = 0.0;
    for (Vertex x = 0; x < n; ++x) acc += std::abs(r[x] / cw - mu[x]);
    per_row[w] = 0.5 * acc;
  });
  return *std::max_element(per_row.begin(), per_row.end());
}

struct KConstants {
  double K1 = 0.0;  // max(max_w h_w, max_j T'_j) / |V|
  double K2 = 0.0;  // |V| * max over neighbours w of v of p(w, v)
};

inline KConstants k_constants(const WeightedGraph& g, const HittingProfile& h,
                              const std::vector<double>& quotient_times) {
  const Vertex v = h.target;
  const double nv = static_cast<double>(g.size());
  KConstants k;
  double worst = 0.0;
  for (double x : h.values) worst = std::max(worst, x);
  for (double x : quotient_times) worst = std::max(worst, x);
  k.K1 = worst / nv;
  double pmax = 0.0;
  for (Vertex w = 0; w < g.size(); ++w)
    if (w != v && g.adjacent(w, v)) pmax = std::max(pmax, g.weight(w, v) / g.strength(w));
  k.K2 = nv * pmax;
  return k;
}

inline KConstants k_constants(const WeightedGraph& g, Vertex v, const QuotientChain& Q) {
  return k_constants(g, hitting_profile(g, v), quotient_hitting(Q));
}

/// Degree-regularity surrogates for K1, K2 and lambda on unit-weight graphs.
///
/// (D, delta) is the tightest pair with (1 - delta) D <= deg(w)/n <= (1 + delta) D,
/// i.e. the midpoint and relative half-spread of deg/n. alpha is the smallest
/// fraction of a vertex's neighbours that are also neighbours of v. The
/// lambda surrogate is the closed expression (1 - D(1 - delta))(1 + delta)/(1 - delta),
/// which reduces to 1 - D at delta = 0.
struct LemmaBounds {
  double D = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  bool hypothesis_ok = false;  // (1 + delta)^2 D / (1 - delta) <= 1
  bool applicable = false;     // unit weights and alpha > 0
  std::string reason;          // why not applicable, if so
  double K1_bound = std::numeric_limits<double>::infinity();
  double K2_bound = std::numeric_limits<double>::infinity();
  double lambda_bound = std::numeric_limits<double>::infinity();
};

inline LemmaBounds degree_lemma_bounds(const WeightedGraph& g, Vertex v) {
  require_vertex(g, v);
  require_connected(g);
  LemmaBounds out;
  if (!g.unit_weights()) {
    out.reason = "graph has non-unit weights or self-loops";
    return out;
  }
  const std::size_t n = g.size();
  const double nd = static_cast<double>(n);
  std::vector<std::size_t> deg(n);
  for (Vertex w = 0; w < n; ++w) deg[w] = g.degree(w);
  const auto [lo_it, hi_it] = std::minmax_element(deg.begin(), deg.end());
  const double dmin = static_cast<double>(*lo_it);
  const double dmax = static_cast<double>(*hi_it);
  out.D = (dmax / nd + dmin / nd) / 2.0;
  out.delta = (dmax - dmin) / (dmax + dmin);
  out.hypothesis_ok = (1.0 + out.delta) * (1.0 + out.delta) * out.D / (1.0 - out.delta) <= 1.0;

  double alpha = std::numeric_limits<double>::infinity();
  const auto rv = g.row(v);
  for (Vertex w = 0; w < n; ++w) {
    if (w == v) continue;
    const auto rw = g.row(w);
    std::size_t shared = 0;
    for (Vertex x = 0; x < n; ++x)
      if (x != w && rw[x] > 0.0 && rv[x] > 0.0) ++shared;
    alpha = std::min(alpha, static_cast<double>(shared) / static_cast<double>(deg[w]));
  }
  out.alpha = alpha;
  if (!(alpha > 0.0)) {
    out.reason = "some vertex shares no neighbour with the target (alpha = 0)";
    return out;
  }
  out.applicable = true;
  out.K1_bound = 2.0 * out.D * (1.0 + out.delta) / alpha;
  out.K2_bound = 1.0 / (out.D * (1.0 - out.delta));
  out.lambda_bound = (1.0 - out.D * (1.0 - out.delta)) * (1.0 + out.delta) / (1.0 - out.delta);
  return out;
}

inline constexpr double kLambdaFloor = 1e-12;

/// 16 K1 K2 eps / log^2(lambda) * log^2(eps K2 / |V| (1 - sqrt(lambda))),
/// natural logs; zero at eps = 0 and lambda = 0 is replaced by 1e-12.
inline double theorem_bound(double eps, double K1, double K2, double lambda,
                            double n_vertices) {
  if (!(eps >= 0.0)) throw InvalidArgument("theorem_bound: epsilon must be non-negative");
  if (!(lambda >= 0.0)) throw InvalidArgument("theorem_bound: lambda must be non-negative");
  if (lambda >= 1.0) throw Degenerate("theorem_bound: lambda >= 1, mixing assumption fails");
  if (!(n_vertices > 0.0)) throw InvalidArgument("theorem_bound: |V| must be positive");
  if (eps == 0.0) return 0.0;
  if (std::isinf(eps)) return std::numeric_limits<double>::infinity();
  const double lam = std::max(lambda, kLambdaFloor);
  const double log_lam = std::log(lam);
  const double inner = std::log(eps * K2 / n_vertices * (1.0 - std::sqrt(lam)));
  return 16.0 * K1 * K2 * eps / (log_lam * log_lam) * inner * inner;
}

/// Everything needed to judge how well the lumped chain predicts the walk.
struct AssumptionReport {
  Vertex target = 0;
  std::size_t vertices = 0;
  double epsilon = 0.0;  // may be +infinity
  double K1 = 0.0;
  double K2 = 0.0;
  double lambda = 0.0;
  LemmaBounds lemma;
  bool assumptions_hold = false;  // eps < 1 and lambda < 1
  double theorem_bound = std::numeric_limits<double>::infinity();
  double trivial_bound = 0.0;  // K1 |V|
  double effective_bound = 0.0;  // min(theorem_bound, trivial_bound)
  double realized_gap = 0.0;     // max_w |h_w - T'_{gamma(w)}|
};

inline AssumptionReport assess(const WeightedGraph& g, const HittingProfile& h,
                               const Partition& P, const QuotientChain& Q,
                               const std::vector<double>& T) {
  AssumptionReport rep;
  rep.target = h.target;
  rep.vertices = g.size();
  rep.epsilon = epsilon(g, P, Q);
  const KConstants k = k_constants(g, h, T);
  rep.K1 = k.K1;
  rep.K2 = k.K2;
  rep.lambda = lambda_exact(g);
  rep.lemma = degree_lemma_bounds(g, h.target);
  rep.assumptions_hold = rep.epsilon < 1.0 && rep.lambda < 1.0;
  if (rep.lambda < 1.0)
    rep.theorem_bound = theorem_bound(rep.epsilon, rep.K1, rep.K2, rep.lambda,
                                      static_cast<double>(g.size()));
  rep.trivial_bound = rep.K1 * static_cast<double>(g.size());
  rep.effective_bound = std::min(rep.theorem_bound, rep.trivial_bound);
  for (Vertex w = 0; w < g.size(); ++w)
    rep.realized_gap = std::max(rep.realized_gap, std::abs(h.values[w] - T[P.gamma[w]]));
  return rep;
}

inline AssumptionReport assess(const WeightedGraph& g, Vertex v, const Partition& P) {
  const HittingProfile h = hitting_profile(g, v);
  const QuotientChain Q = build_quotient(g, P);
  return assess(g, h, P, Q, quotient_hitting(Q));
}

}  // namespace hitlab
