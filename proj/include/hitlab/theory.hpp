#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/gen.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/quotient.hpp"

namespace hitlab {

enum class Provenance { closed_form, numeric_quotient };

inline const char* to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "numeric_quotient";
}

/// One predicted hitting-time level. community is relative to the target:
/// 0 is the target's own community, -1 means "not modelled" (ER classes).
struct PredictedClass {
  std::string name;
  double offset = 0.0;
  bool adjacent = false;
  int community = -1;
};

/// Predicted values base + offset per class, with base = 2|E|/deg(v) - 1
/// taken from the realised graph (sum of strengths over c_v in general).
struct ClusterPrediction {
  double base = 0.0;
  std::vector<PredictedClass> classes;
  Provenance provenance = Provenance::closed_form;

  double value(std::size_t cls) const { return base + classes.at(cls).offset; }
};

inline double realized_base(const WeightedGraph& g, Vertex v) {
  return g.total_strength() / g.strength(v) - 1.0;
}

/// Two-level prediction for Erdos-Renyi graphs, from realised edge counts.
///
/// X counts edges between N(v) and the rest R; Y counts ordered pairs inside
/// R (twice the number of internal edges), which is what a Bin((|R|)(|R|-1), p)
/// variable models. The non-adjacent offset is (X + Y) / X = 1 / q(R, N(v)).
struct ErPrediction {
  ClusterPrediction prediction;
  double X = 0.0;
  double Y = 0.0;
  double q21 = 0.0;
  // Lumped-chain cross-checks: T'_1 = base and T'_2 - T'_1 = 1 / q21.
  double T1 = 0.0;
  double T2 = 0.0;
  double identity_error = 0.0;
};

/// Trial counts of the binomial laws of X and Y given deg(v); reference only.
struct ErBinomialLaws {
  double x_trials = 0.0;  // deg(v) (n - deg(v) - 1)
  double y_trials = 0.0;  // (n - deg(v) - 1)(n - deg(v) - 2)
};

inline ErBinomialLaws er_binomial_laws(std::size_t n, std::size_t deg_v) {
  const double rest = static_cast<double>(n) - static_cast<double>(deg_v) - 1.0;
  return {static_cast<double>(deg_v) * rest, rest * (rest - 1.0)};
}

inline ErPrediction er_prediction(const WeightedGraph& g, Vertex v) {
  require_vertex(g, v);
  if (!g.unit_weights()) throw InvalidArgument("ER prediction needs a unit-weight graph");
  const Partition P = canonical_partition(g, v, false);
  const std::size_t n = g.size();
  ErPrediction out;
  for (Vertex w = 0; w < n; ++w) {
    if (w == v) continue;
    const auto r = g.row(w);
    for (Vertex x = 0; x < n; ++x) {
      if (r[x] == 0.0 || x == v) continue;
      const bool w_adj = P.gamma[w] == 1;
      const bool x_adj = P.gamma[x] == 1;
      if (w_adj && !x_adj) out.X += 1.0;
      if (!w_adj && !x_adj) out.Y += 1.0;
    }
  }
  if (out.X == 0.0) throw Degenerate("no edges leave the neighbourhood of the target");
  out.q21 = out.X / (out.X + out.Y);
  const double base = realized_base(g, v);
  out.prediction.base = base;
  out.prediction.provenance = Provenance::closed_form;
  out.prediction.classes = {{"adjacent", 0.0, true, -1},
                            {"non-adjacent", (out.X + out.Y) / out.X, false, -1}};

  const QuotientChain Q = build_quotient(g, P);
  const std::vector<double> T = quotient_hitting(Q);
  out.T1 = T[1];
  out.T2 = T[2];
  const double e1 = std::abs(T[1] - base) / std::max(1.0, base);
  const double e2 = std::abs((T[2] - T[1]) - 1.0 / out.q21) / std::max(1.0, 1.0 / out.q21);
  out.identity_error = std::max(e1, e2);
  if (out.identity_error > 1e-9)
    throw Error("ER lumped-chain identities disagree by " + std::to_string(out.identity_error));
  return out;
}

/// Offsets of the four two-community levels, in the order
/// same-adj, diff-adj, same-nonadj, diff-nonadj.
inline std::array<double, 4> sbm_offsets(double p, double q) {
  const double s = p + q;
  const double same = -(q - p) * (q - p) / (s * s);
  const double diff = p * (q - p) * (q - p) / (q * s * s);
  return {same, diff, same + 2.0 / s, diff + 2.0 / s};
}

inline ClusterPrediction sbm_prediction(double p, double q, double base) {
  require_open_probability(p, "p");
  require_open_probability(q, "q");
  const auto off = sbm_offsets(p, q);
  ClusterPrediction out;
  out.base = base;
  out.provenance = Provenance::closed_form;
  out.classes = {{"same-adj", off[0], true, 0},
                 {"diff-adj", off[1], true, 1},
                 {"same-nonadj", off[2], false, 0},
                 {"diff-nonadj", off[3], false, 1}};
  return out;
}

/// The 4x4 matrix acting on the level corrections (same-adj, diff-adj,
/// same-nonadj, diff-nonadj); it is row-stochastic with rows 1 = 3 and 2 = 4.
inline Eigen::Matrix4d bpq_matrix(double p, double q) {
  const double s = p + q;
  Eigen::Matrix4d B;
  const Eigen::RowVector4d top(p * p / s, q * q / s, p * (1 - p) / s, q * (1 - q) / s);
  const Eigen::RowVector4d bottom(p * q / s, p * q / s, q * (1 - p) / s, p * (1 - q) / s);
  B << top, bottom, top, bottom;
  return B;
}

/// Numeric solution of T = rhs + B T for the level corrections.
///
/// B is stochastic, so I - B has rank 3; the system is consistent and the
/// free constant is fixed by the return-time identity p T_1 + q T_2 = 0
/// (the corrections of the two neighbour levels average to zero under the
/// first step from v). That normalisation replaces the last equation, which
/// is then re-checked through the full residual.
struct BpqSolution {
  std::array<double, 4> T{};
  double residual = 0.0;  // ||(I - B) T - rhs||_inf over all four rows
  double gap31 = 0.0;     // T_3 - T_1
  double gap42 = 0.0;     // T_4 - T_2
  // Candidate closed forms for level 4; the one matching T_4 is shipped.
  double class4_corollary = 0.0;  // p (q-p)^2 / (q (p+q)^2) + 2/(p+q)
  double class4_printed = 0.0;    // q (p-q)^2 / (p (p+q)^2) + 2/(p+q)
  double closed_form_error = 0.0;  // max_i |T_i - sbm_offsets(p,q)[i]|
  std::string class4_verdict;
};

inline BpqSolution bpq_solve(double p, double q) {
  require_open_probability(p, "p");
  require_open_probability(q, "q");
  const double s = p + q;
  const Eigen::Matrix4d B = bpq_matrix(p, q);
  const Eigen::Matrix4d A = Eigen::Matrix4d::Identity() - B;
  const Eigen::Vector4d rhs(1 - 2 / s, 1 - 2 / s, 1, 1);

  Eigen::Matrix4d Ab = A;
  Eigen::Vector4d bb = rhs;
  Ab.row(3) << p, q, 0, 0;
  bb(3) = 0;
  Eigen::PartialPivLU<Eigen::Matrix4d> lu(Ab);
  if (!(std::abs(lu.determinant()) > 1e-14)) throw SingularSystem("B_pq system is singular");
  Eigen::Vector4d T = lu.solve(bb);
  T += lu.solve(bb - Ab * T);

  BpqSolution out;
  for (int i = 0; i < 4; ++i) out.T[static_cast<std::size_t>(i)] = T(i);
  out.residual = (A * T - rhs).lpNorm<Eigen::Infinity>();
  out.gap31 = T(2) - T(0);
  out.gap42 = T(3) - T(1);
  out.class4_corollary = p * (q - p) * (q - p) / (q * s * s) + 2 / s;
  out.class4_printed = q * (p - q) * (p - q) / (p * s * s) + 2 / s;
  const auto off = sbm_offsets(p, q);
  for (int i = 0; i < 4; ++i)
    out.closed_form_error = std::max(out.closed_form_error, std::abs(T(i) - off[static_cast<std::size_t>(i)]));
  const double dc = std::abs(T(3) - out.class4_corollary);
  const double dp = std::abs(T(3) - out.class4_printed);
  if (dc <= 1e-12 && dp <= 1e-12)
    out.class4_verdict = "both candidates agree at these parameters";
  else if (dc <= 1e-12)
    out.class4_verdict = "corollary form p(q-p)^2/(q(p+q)^2) + 2/(p+q) matches";
  else if (dp <= 1e-12)
    out.class4_verdict = "printed form q(p-q)^2/(p(p+q)^2) + 2/(p+q) matches";
  else
    out.class4_verdict = "neither candidate matches";
  return out;
}

/// Leading-order 5x5 lumped transition matrix for two communities of size n,
/// blocks (target, same-adj, diff-adj, same-nonadj, diff-nonadj). Rows 1 and 2
/// carry 1/((p+q) n) back to the target; the remaining entries of those rows
/// are scaled by 1 - 1/((p+q) n) so every row sums to one.
inline Eigen::Matrix<double, 5, 5> sbm_quotient_matrix(double p, double q, std::size_t n) {
  require_open_probability(p, "p");
  require_open_probability(q, "q");
  if (n < 2) throw InvalidArgument("sbm_quotient_matrix needs n >= 2");
  const double s = p + q;
  const double back = 1.0 / (s * static_cast<double>(n));
  const Eigen::Matrix4d B = bpq_matrix(p, q);
  Eigen::Matrix<double, 5, 5> Q = Eigen::Matrix<double, 5, 5>::Zero();
  Q(0, 1) = p / s;
  Q(0, 2) = q / s;
  Q.bottomRightCorner<4, 4>() = B;
  Q.block<2, 4>(1, 1) *= (1.0 - back);
  Q(1, 0) = back;
  Q(2, 0) = back;
  return Q;
}

/// Levels T'_i read off the lumped chain of a canonical partition; one class
/// per non-target block, carrying the block's community and adjacency.
inline ClusterPrediction quotient_prediction(const WeightedGraph& g, const Partition& P,
                                             const std::vector<double>& T) {
  ClusterPrediction out;
  out.base = realized_base(g, P.target());
  out.provenance = Provenance::numeric_quotient;
  for (std::size_t b = 1; b < P.block_count(); ++b)
    out.classes.push_back({P.info[b].name, T[b] - out.base, P.info[b].adjacent, P.info[b].community});
  return out;
}

/// Within- and across-community edge densities of a labelled graph.
struct DensityEstimate {
  double p = 0.0;
  double q = 0.0;
};

inline DensityEstimate estimate_densities(const WeightedGraph& g) {
  if (!g.has_labels()) throw InvalidArgument("graph carries no community labels");
  double within = 0, within_pairs = 0, across = 0, across_pairs = 0;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v) {
      const bool same = g.label(u) == g.label(v);
      (same ? within_pairs : across_pairs) += 1;
      if (g.adjacent(u, v)) (same ? within : across) += 1;
    }
  if (within_pairs == 0 || across_pairs == 0)
    throw Degenerate("need at least two communities with within-community pairs");
  return {within / within_pairs, across / across_pairs};
}

}  // namespace hitlab
