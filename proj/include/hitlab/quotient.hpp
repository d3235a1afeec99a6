#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"

namespace hitlab {

/// What a block of a canonical partition stands for. community is the rank
/// of the block's community with the target's community first (-1 for
/// partitions built by hand or without labels).
struct BlockInfo {
  std::string name;
  int community = -1;
  bool adjacent = false;
};

/// Blocks V_0 = {v}, V_1, ..., V_m covering the vertex set; gamma[w] is the
/// index of the block holding w.
struct Partition {
  std::vector<std::vector<Vertex>> blocks;
  std::vector<std::size_t> gamma;
  std::vector<BlockInfo> info;

  std::size_t block_count() const noexcept { return blocks.size(); }
  Vertex target() const { return blocks.at(0).at(0); }
};

/// Validates and completes a partition: V_0 must be a singleton, blocks must
/// be non-empty, disjoint, and cover [0, n).
inline Partition make_partition(std::size_t n, std::vector<std::vector<Vertex>> blocks,
                                std::vector<BlockInfo> info = {}) {
  if (blocks.empty() || blocks[0].size() != 1)
    throw InvalidArgument("partition block 0 must be the singleton target");
  if (!info.empty() && info.size() != blocks.size())
    throw InvalidArgument("block info count does not match block count");
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> gamma(n, unset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty())
      throw Degenerate("partition block " + std::to_string(b) +
                       (info.empty() ? std::string() : " (" + info[b].name + ")") +
                       " is empty");
    for (Vertex w : blocks[b]) {
      if (w >= n) throw InvalidArgument("partition references vertex out of range");
      if (gamma[w] != unset)
        throw InvalidArgument("vertex " + std::to_string(w) + " appears in two blocks");
      gamma[w] = b;
    }
  }
  for (Vertex w = 0; w < n; ++w)
    if (gamma[w] == unset)
      throw InvalidArgument("vertex " + std::to_string(w) + " is not covered by the partition");
  if (info.empty()) {
    info.resize(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) info[b].name = "block" + std::to_string(b);
    info[0].name = "target";
  }
  return Partition{std::move(blocks), std::move(gamma), std::move(info)};
}

/// Every vertex in its own block, target first.
inline Partition identity_partition(std::size_t n, Vertex v) {
  std::vector<std::vector<Vertex>> blocks{{v}};
  for (Vertex w = 0; w < n; ++w)
    if (w != v) blocks.push_back({w});
  return make_partition(n, std::move(blocks));
}

/// Without labels: {v}, N(v), rest. With labels: {v}, then the neighbours of
/// v in each community, then the non-neighbours of v in each community;
/// communities are ordered with v's own first and the others by label.
/// "Adjacent" means positive weight to v.
inline Partition canonical_partition(const WeightedGraph& g, Vertex v, bool use_labels) {
  require_vertex(g, v);
  require_connected(g);
  const std::size_t n = g.size();

  std::vector<int> rank(n, 0);
  std::vector<int> order;
  if (use_labels) {
    if (!g.has_labels()) throw InvalidArgument("graph carries no community labels");
    std::map<int, int> seen;
    for (Vertex w = 0; w < n; ++w) seen.emplace(g.label(w), 0);
    order.push_back(g.label(v));
    for (const auto& [lab, unused] : seen)
      if (lab != g.label(v)) order.push_back(lab);
    std::map<int, int> rank_of;
    for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = static_cast<int>(r);
    for (Vertex w = 0; w < n; ++w) rank[w] = rank_of[g.label(w)];
  } else {
    order.push_back(0);
  }
  const std::size_t k = order.size();

  std::vector<std::vector<Vertex>> blocks(2 * k + 1);
  std::vector<BlockInfo> info(2 * k + 1);
  blocks[0] = {v};
  info[0] = {"target", use_labels ? 0 : -1, false};
  for (std::size_t r = 0; r < k; ++r) {
    std::string tag;
    if (use_labels)
      tag = (r == 0 ? "same" : (k == 2 ? "diff" : "comm" + std::to_string(order[r])));
    const int comm = use_labels ? static_cast<int>(r) : -1;
    info[1 + r] = {use_labels ? tag + "-adj" : "adjacent", comm, true};
    info[1 + k + r] = {use_labels ? tag + "-nonadj" : "non-adjacent", comm, false};
  }
  for (Vertex w = 0; w < n; ++w) {
    if (w == v) continue;
    const std::size_t r = static_cast<std::size_t>(rank[w]);
    blocks[g.adjacent(w, v) ? 1 + r : 1 + k + r].push_back(w);
  }
  return make_partition(n, std::move(blocks), std::move(info));
}

/// Lumped chain on the blocks. C(i, j) sums c(w, w') over ordered pairs
/// w in V_i, w' in V_j, so C(i, i) counts each internal edge twice and
/// Ci[i] = sum_{w in V_i} c_w.
struct QuotientChain {
  Eigen::MatrixXd C;
  std::vector<double> Ci;
  Eigen::MatrixXd q;
  std::vector<double> nu;

  std::size_t size() const noexcept { return Ci.size(); }
};

inline QuotientChain build_quotient(const WeightedGraph& g, const Partition& P) {
  const std::size_t n = g.size();
  if (P.gamma.size() != n) throw InvalidArgument("partition does not match graph size");
  const auto m1 = static_cast<Eigen::Index>(P.block_count());
  QuotientChain Q;
  Q.C = Eigen::MatrixXd::Zero(m1, m1);
  for (Vertex w = 0; w < n; ++w) {
    const auto r = g.row(w);
    const auto bi = static_cast<Eigen::Index>(P.gamma[w]);
    for (Vertex x = 0; x < n; ++x)
      if (r[x] != 0.0) Q.C(bi, static_cast<Eigen::Index>(P.gamma[x])) += r[x];
  }
  Q.Ci.resize(P.block_count());
  double total = 0.0;
  for (Eigen::Index i = 0; i < m1; ++i) {
    Q.Ci[i] = Q.C.row(i).sum();
    if (!(Q.Ci[i] > 0.0))
      throw Degenerate("block " + std::to_string(i) + " has zero total weight");
    total += Q.Ci[i];
  }
  Q.q = Q.C;
  for (Eigen::Index i = 0; i < m1; ++i) Q.q.row(i) /= Q.Ci[i];
  Q.nu.resize(P.block_count());
  for (Eigen::Index i = 0; i < m1; ++i) Q.nu[i] = Q.Ci[i] / total;

  const double scale = Q.C.cwiseAbs().maxCoeff();
  if ((Q.C - Q.C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error("quotient weights are not symmetric");
  for (Eigen::Index i = 0; i < m1; ++i)
    if (std::abs(Q.q.row(i).sum() - 1.0) > kProbTolerance)
      throw Error("quotient transition row " + std::to_string(i) + " does not sum to 1");
  return Q;
}

/// R(w, j) = sum_{w' in V_j} p(w, w'), the law of the next block from w.
inline Eigen::MatrixXd block_rows(const WeightedGraph& g, const Partition& P) {
  const std::size_t n = g.size();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(P.block_count()));
  for (Vertex w = 0; w < n; ++w) {
    const auto r = g.row(w);
    for (Vertex x = 0; x < n; ++x)
      if (r[x] != 0.0)
        R(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(P.gamma[x])) += r[x];
    R.row(static_cast<Eigen::Index>(w)) /= g.strength(w);
  }
  return R;
}

/// Largest violation of min_{w in V_i} R(w, j) <= q(i, j) <= max_{w in V_i} R(w, j).
/// Zero up to rounding for every graph, since q(i, .) is the c_w-weighted
/// average of the rows R(w, .) over V_i.
inline double sandwich_violation(const WeightedGraph& g, const Partition& P,
                                 const QuotientChain& Q) {
  const Eigen::MatrixXd R = block_rows(g, P);
  double worst = 0.0;
  for (std::size_t i = 0; i < P.block_count(); ++i) {
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (Vertex w : P.blocks[i]) {
        lo = std::min(lo, R(static_cast<Eigen::Index>(w), j));
        hi = std::max(hi, R(static_cast<Eigen::Index>(w), j));
      }
      const double qij = Q.q(static_cast<Eigen::Index>(i), j);
      worst = std::max({worst, lo - qij, qij - hi});
    }
  }
  return worst;
}

/// T'_{i,0} for every block; entry 0 is zero.
inline std::vector<double> quotient_hitting(const QuotientChain& Q) {
  const auto m1 = static_cast<Eigen::Index>(Q.size());
  // every block must reach block 0 along positive transitions
  std::vector<char> reaches(Q.size(), 0);
  reaches[0] = 1;
  std::queue<Eigen::Index> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    const Eigen::Index j = frontier.front();
    frontier.pop();
    for (Eigen::Index i = 0; i < m1; ++i)
      if (!reaches[i] && Q.q(i, j) > 0.0) {
        reaches[i] = 1;
        frontier.push(i);
      }
  }
  for (Eigen::Index i = 0; i < m1; ++i)
    if (!reaches[i]) throw Degenerate("quotient chain is reducible: block " +
                                      std::to_string(i) + " cannot reach block 0");

  std::vector<double> out(Q.size(), 0.0);
  if (m1 == 1) return out;
  const Eigen::Index m = m1 - 1;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) - Q.q.bottomRightCorner(m, m);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-15)) throw SingularSystem("quotient hitting system is singular");
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd t = lu.solve(rhs);
  t += lu.solve(rhs - a * t);
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i + 1)] = t(i);
  return out;
}

// Block-row deviations at or below this are rounding and count as zero.
inline constexpr double kLumpTolerance = 1e-13;

/// Smallest eps with |R(w, j) - q(i, j)| <= eps * min_{w'' in V_i} R(w'', j)
/// for every block pair and every w in V_i. A pair whose numerator and
/// denominator both vanish contributes 0; a positive numerator over a zero
/// denominator makes eps +infinity.
inline double epsilon(const WeightedGraph& g, const Partition& P, const QuotientChain& Q) {
  const Eigen::MatrixXd R = block_rows(g, P);
  double eps = 0.0;
  for (std::size_t i = 0; i < P.block_count(); ++i) {
    for (Eigen::Index j = 0; j < R.cols(); ++j) {
      double denom = std::numeric_limits<double>::infinity();
      double numer = 0.0;
      const double qij = Q.q(static_cast<Eigen::Index>(i), j);
      for (Vertex w : P.blocks[i]) {
        const double rw = R(static_cast<Eigen::Index>(w), j);
        denom = std::min(denom, rw);
        numer = std::max(numer, std::abs(rw - qij));
      }
      if (numer <= kLumpTolerance) continue;
      if (denom == 0.0) return std::numeric_limits<double>::infinity();
      eps = std::max(eps, numer / denom);
    }
  }
  return eps;
}

inline double epsilon(const WeightedGraph& g, const Partition& P) {
  return epsilon(g, P, build_quotient(g, P));
}

/// Self-checks relating the walk and its lumped chain under stationarity.
struct ProjectionReport {
  double stationary_error = 0.0;  // max_i |sum_{w in V_i} mu_w - nu_i|
  double pair_error = 0.0;        // max_{i,j} |sum_{w in V_i} mu_w R(w,j) - nu_i q(i,j)|
  double tv_quotient = 0.0;       // max_i d_TV(q(i, .), nu)
  double tv_full = 0.0;           // max_w d_TV(p(w, .), mu)
  bool stationary_ok = false;
  bool pair_ok = false;
  bool tv_ok = false;

  bool all_pass() const noexcept { return stationary_ok && pair_ok && tv_ok; }
};

inline ProjectionReport projection_identity_check(const WeightedGraph& g, const Partition& P) {
  const Distribution mu = stationary(g);
  const QuotientChain Q = build_quotient(g, P);
  const Eigen::MatrixXd R = block_rows(g, P);
  const std::size_t n = g.size();
  const std::size_t m1 = P.block_count();
  ProjectionReport rep;

  for (std::size_t i = 0; i < m1; ++i) {
    double mass = 0.0;
    for (Vertex w : P.blocks[i]) mass += mu[w];
    rep.stationary_error = std::max(rep.stationary_error, std::abs(mass - Q.nu[i]));
    for (std::size_t j = 0; j < m1; ++j) {
      double flow = 0.0;
      for (Vertex w : P.blocks[i])
        flow += mu[w] * R(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(j));
      const double target = Q.nu[i] * Q.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      rep.pair_error = std::max(rep.pair_error, std::abs(flow - target));
    }
    std::vector<double> qi(m1);
    for (std::size_t j = 0; j < m1; ++j)
      qi[j] = Q.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    rep.tv_quotient = std::max(rep.tv_quotient, tv_distance(qi, Q.nu));
  }
  for (Vertex w = 0; w < n; ++w) {
    const double cw = g.strength(w);
    const auto r = g.row(w);
    double acc = 0.0;
    for (Vertex x = 0; x < n; ++x) acc += std::abs(r[x] / cw - mu[x]);
    rep.tv_full = std::max(rep.tv_full, 0.5 * acc);
  }
  rep.stationary_ok = rep.stationary_error <= 1e-12;
  rep.pair_ok = rep.pair_error <= 1e-12;
  rep.tv_ok = rep.tv_quotient <= rep.tv_full + 1e-12;
  return rep;
}

}  // namespace hitlab
