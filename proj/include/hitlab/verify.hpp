#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hitlab/assumptions.hpp"
#include "hitlab/detect.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/io.hpp"
#include "hitlab/quotient.hpp"
#include "hitlab/theory.hpp"

namespace hitlab {

// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Partition& P) {
  json blocks = json::array();
  for (std::size_t b = 0; b < P.block_count(); ++b)
    blocks.push_back({{"index", b},
                      {"name", P.info[b].name},
                      {"community", P.info[b].community},
                      {"adjacent", P.info[b].adjacent},
                      {"size", P.blocks[b].size()}});
  return blocks;
}

inline json to_json(const QuotientChain& Q) {
  json nu = json::array();
  for (double x : Q.nu) nu.push_back(num(x));
  return {{"C", matrix_json(Q.C)}, {"q", matrix_json(Q.q)}, {"nu", std::move(nu)}};
}

inline json to_json(const LemmaBounds& L) {
  return {{"D", num(L.D)},
          {"delta", num(L.delta)},
          {"alpha", num(L.alpha)},
          {"hypothesis_ok", L.hypothesis_ok},
          {"applicable", L.applicable},
          {"reason", L.reason},
          {"K1_bound", num(L.K1_bound)},
          {"K2_bound", num(L.K2_bound)},
          {"lambda_bound", num(L.lambda_bound)},
          {"lambda_bound_form", "(1 - D(1 - delta)) (1 + delta) / (1 - delta)"}};
}

inline json to_json(const AssumptionReport& r) {
  return {{"target", r.target},
          {"vertices", r.vertices},
          {"epsilon", num(r.epsilon)},
          {"epsilon_infinite", std::isinf(r.epsilon)},
          {"K1", num(r.K1)},
          {"K2", num(r.K2)},
          {"lambda", num(r.lambda)},
          {"lemma", to_json(r.lemma)},
          {"assumptions_hold", r.assumptions_hold},
          {"theorem_bound", num(r.theorem_bound)},
          {"trivial_bound", num(r.trivial_bound)},
          {"effective_bound", num(r.effective_bound)},
          {"realized_gap", num(r.realized_gap)}};
}

inline json to_json(const ClusterPrediction& p) {
  json classes = json::array();
  for (std::size_t c = 0; c < p.classes.size(); ++c)
    classes.push_back({{"name", p.classes[c].name},
                       {"offset", num(p.classes[c].offset)},
                       {"value", num(p.value(c))},
                       {"adjacent", p.classes[c].adjacent},
                       {"community", p.classes[c].community}});
  return {{"base", num(p.base)}, {"provenance", to_string(p.provenance)}, {"classes", classes}};
}

inline json to_json(const BpqSolution& s) {
  return {{"T", {num(s.T[0]), num(s.T[1]), num(s.T[2]), num(s.T[3])}},
          {"residual", num(s.residual)},
          {"gap31", num(s.gap31)},
          {"gap42", num(s.gap42)},
          {"class4_corollary", num(s.class4_corollary)},
          {"class4_printed", num(s.class4_printed)},
          {"closed_form_error", num(s.closed_form_error)},
          {"class4_verdict", s.class4_verdict}};
}

struct ClassStats {
  std::string name;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double predicted = 0.0;
  double quotient = 0.0;       // T' of the matching block
  double max_deviation = 0.0;  // max |h_w - predicted| over the class
};

/// Per-instance comparison of exact hitting times, the lumped chain, the
/// closed-form levels, and the coupling bound.
struct VerifyReport {
  Vertex target = 0;
  std::size_t vertices = 0;
  Partition partition;
  QuotientChain quotient;
  std::vector<double> quotient_times;
  ClusterPrediction prediction;
  std::vector<ClassStats> classes;
  double max_deviation = 0.0;
  AssumptionReport assumptions;
  double realized_quotient_gap = 0.0;
  double return_time = 0.0;
  double return_time_gap = 0.0;
  double class_accuracy = 0.0;
  double adjacency_accuracy = 0.0;
  std::optional<double> community_accuracy;
  std::optional<BpqSolution> bpq;
  bool gap_within_bound = false;
  HittingProfile profile;
  DetectionResult detection;
};

struct VerifyOptions {
  bool use_labels = false;
  std::optional<double> p;
  std::optional<double> q;
};

/// Prediction used by verify/detect: ER levels without labels, the
/// two-community closed form with two labels, the lumped chain otherwise
/// (weighted graphs, three or more communities).
inline ClusterPrediction choose_prediction(const WeightedGraph& g, Vertex v, const Partition& P,
                                           const std::vector<double>& T, const VerifyOptions& opt,
                                           std::optional<BpqSolution>* bpq = nullptr) {
  const std::size_t communities = (P.block_count() - 1) / 2;
  if (!opt.use_labels) {
    if (g.unit_weights()) return er_prediction(g, v).prediction;
    return quotient_prediction(g, P, T);
  }
  if (communities == 2 && g.unit_weights()) {
    double p = 0, q = 0;
    if (opt.p && opt.q) {
      p = *opt.p;
      q = *opt.q;
    } else {
      const auto d = estimate_densities(g);
      p = opt.p.value_or(d.p);
      q = opt.q.value_or(d.q);
    }
    if (bpq) *bpq = bpq_solve(p, q);
    return sbm_prediction(p, q, realized_base(g, v));
  }
  return quotient_prediction(g, P, T);
}

inline VerifyReport verify_instance(const WeightedGraph& g, Vertex v, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.target = v;
  rep.vertices = g.size();
  rep.profile = hitting_profile(g, v);
  rep.partition = canonical_partition(g, v, opt.use_labels);
  rep.quotient = build_quotient(g, rep.partition);
  rep.quotient_times = quotient_hitting(rep.quotient);
  rep.prediction = choose_prediction(g, v, rep.partition, rep.quotient_times, opt, &rep.bpq);
  rep.assumptions = assess(g, rep.profile, rep.partition, rep.quotient, rep.quotient_times);
  rep.realized_quotient_gap = rep.assumptions.realized_gap;
  const ReturnTime rt = return_time(g, rep.profile);
  rep.return_time = rt.value;
  rep.return_time_gap = rt.gap;

  const std::vector<int> expected = expected_classes(rep.partition);
  rep.classes.resize(rep.prediction.classes.size());
  for (std::size_t c = 0; c < rep.classes.size(); ++c) {
    rep.classes[c].name = rep.prediction.classes[c].name;
    rep.classes[c].predicted = rep.prediction.value(c);
    rep.classes[c].quotient = rep.quotient_times[c + 1];
    rep.classes[c].min = std::numeric_limits<double>::infinity();
    rep.classes[c].max = -std::numeric_limits<double>::infinity();
  }
  for (Vertex w = 0; w < g.size(); ++w) {
    if (w == v) continue;
    ClassStats& s = rep.classes[static_cast<std::size_t>(expected[w])];
    const double h = rep.profile.values[w];
    ++s.count;
    s.mean += h;
    s.min = std::min(s.min, h);
    s.max = std::max(s.max, h);
    s.max_deviation = std::max(s.max_deviation, std::abs(h - s.predicted));
  }
  for (ClassStats& s : rep.classes) {
    if (s.count) s.mean /= static_cast<double>(s.count);
    rep.max_deviation = std::max(rep.max_deviation, s.max_deviation);
  }

  rep.detection = classify_vertices(rep.profile, rep.prediction);
  rep.class_accuracy = class_accuracy(rep.detection, expected);
  rep.adjacency_accuracy = adjacency_accuracy(rep.detection, g);
  if (g.has_labels()) rep.community_accuracy = detection_accuracy(rep.detection, *g.labels());
  rep.gap_within_bound = !rep.assumptions.assumptions_hold ||
                         rep.realized_quotient_gap <= rep.assumptions.effective_bound;
  return rep;
}

inline json to_json(const VerifyReport& r) {
  json classes = json::array();
  for (const ClassStats& s : r.classes)
    classes.push_back({{"name", s.name},
                       {"count", s.count},
                       {"mean", num(s.mean)},
                       {"min", num(s.min)},
                       {"max", num(s.max)},
                       {"predicted", num(s.predicted)},
                       {"quotient", num(s.quotient)},
                       {"max_deviation", num(s.max_deviation)}});
  json qt = json::array();
  for (double t : r.quotient_times) qt.push_back(num(t));
  json out = {{"target", r.target},
              {"vertices", r.vertices},
              {"partition", to_json(r.partition)},
              {"quotient", to_json(r.quotient)},
              {"quotient_times", qt},
              {"prediction", to_json(r.prediction)},
              {"classes", classes},
              {"max_deviation", num(r.max_deviation)},
              {"assumptions", to_json(r.assumptions)},
              {"realized_quotient_gap", num(r.realized_quotient_gap)},
              {"gap_within_bound", r.gap_within_bound},
              {"return_time", num(r.return_time)},
              {"return_time_gap", num(r.return_time_gap)},
              {"class_accuracy", num(r.class_accuracy)},
              {"adjacency_accuracy", num(r.adjacency_accuracy)},
              {"community_accuracy", r.community_accuracy ? num(*r.community_accuracy) : json()}};
  if (r.bpq) out["bpq"] = to_json(*r.bpq);
  return out;
}

}  // namespace hitlab
