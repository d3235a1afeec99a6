#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hitlab/hitlab.hpp"

namespace hitlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitDegenerate = 2;

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
};

inline void emit(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text;
  else
    write_text(g.out, text);
}

inline void emit(const Globals& g, const json& doc) { emit(g, doc.dump(2) + "\n"); }

inline std::string format_or(const Globals& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "json" && f != "csv") throw InvalidArgument("--format must be json or csv");
  return f;
}

inline std::size_t community_count(const WeightedGraph& g) {
  if (!g.has_labels()) return 0;
  return std::set<int>(g.labels()->begin(), g.labels()->end()).size();
}

inline WeightedGraph load(const std::string& path, Vertex target) {
  WeightedGraph g = read_graph(path);
  require_vertex(g, target);
  return g;
}

struct GenArgs {
  std::string model;
  std::size_t n = 0;
  std::optional<double> p, q;
  std::vector<std::size_t> sizes;
};

inline int cmd_gen(const Globals& G, const GenArgs& a) {
  WeightedGraph g = [&] {
    if (a.model == "er") {
      if (a.n == 0 || !a.p) throw InvalidArgument("gen --model er needs --n and --p");
      return sample_er(a.n, *a.p, G.seed);
    }
    if (a.model == "sbm") {
      if (!a.p || !a.q) throw InvalidArgument("gen --model sbm needs --p and --q");
      SbmSpec spec;
      spec.community_sizes = a.sizes;
      if (spec.community_sizes.empty()) {
        if (a.n == 0) throw InvalidArgument("gen --model sbm needs --sizes or --n");
        spec.community_sizes = {a.n, a.n};
      }
      spec.p = *a.p;
      spec.q = *a.q;
      spec.seed = G.seed;
      return sample_sbm(spec);
    }
    throw InvalidArgument("--model must be er or sbm");
  }();
  if (format_or(G, "json") == "csv")
    emit(G, graph_to_csv(g));
  else
    emit(G, graph_to_json(g));
  return kExitOk;
}

struct GraphArgs {
  std::string graph;
  Vertex target = 0;
  bool use_labels = false;
};

inline int cmd_hit(const Globals& G, const GraphArgs& a) {
  const WeightedGraph g = load(a.graph, a.target);
  const HittingProfile h = hitting_profile(g, a.target);
  if (format_or(G, "csv") == "csv") {
    emit(G, profile_to_csv(g, h));
  } else {
    json values = json::array();
    for (double x : h.values) values.push_back(num(x));
    emit(G, json{{"target", h.target},
                 {"hitting_times", values},
                 {"residual", num(one_step_residual(g, h))}});
  }
  return kExitOk;
}

inline int cmd_quotient(const Globals& G, const GraphArgs& a) {
  const WeightedGraph g = load(a.graph, a.target);
  const Partition P = canonical_partition(g, a.target, a.use_labels);
  const QuotientChain Q = build_quotient(g, P);
  const double eps = epsilon(g, P, Q);
  json out = {{"target", a.target}, {"partition", to_json(P)}, {"quotient", to_json(Q)}};
  json T = json::array();
  try {
    for (double t : quotient_hitting(Q)) T.push_back(num(t));
    out["T_prime"] = T;
  } catch (const Degenerate& e) {
    out["T_prime"] = nullptr;
    out["T_prime_error"] = e.what();
  }
  out["epsilon"] = num(eps);
  out["epsilon_infinite"] = std::isinf(eps);
  emit(G, out);
  return std::isinf(eps) || out["T_prime"].is_null() ? kExitDegenerate : kExitOk;
}

inline bool lemma_degenerate(const WeightedGraph& g, const LemmaBounds& L) {
  return g.unit_weights() && !(L.alpha > 0.0);
}

inline int cmd_assume(const Globals& G, const GraphArgs& a) {
  const WeightedGraph g = load(a.graph, a.target);
  const Partition P = canonical_partition(g, a.target, a.use_labels);
  const AssumptionReport r = assess(g, a.target, P);
  json out = to_json(r);
  out["partition"] = to_json(P);
  emit(G, out);
  return std::isinf(r.epsilon) || lemma_degenerate(g, r.lemma) ? kExitDegenerate : kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string graph;
  std::optional<Vertex> target;
  bool closed_form = false;
  std::optional<double> p, q, base;
};

inline int cmd_predict(const Globals& G, const PredictArgs& a) {
  if (a.closed_form) {
    if (!a.p || !a.q || !a.base) throw InvalidArgument("predict --closed-form needs --p, --q and --base");
    emit(G, json{{"prediction", to_json(sbm_prediction(*a.p, *a.q, *a.base))},
                 {"bpq", to_json(bpq_solve(*a.p, *a.q))}});
    return kExitOk;
  }
  if (a.graph.empty() || !a.target) throw InvalidArgument("predict needs --graph and --target");
  const WeightedGraph g = load(a.graph, *a.target);
  if (a.model == "er") {
    const ErPrediction e = er_prediction(g, *a.target);
    const ErBinomialLaws laws = er_binomial_laws(g.size(), g.degree(*a.target));
    emit(G, json{{"target", *a.target},
                 {"prediction", to_json(e.prediction)},
                 {"X", num(e.X)},
                 {"Y", num(e.Y)},
                 {"q21", num(e.q21)},
                 {"T_prime", {num(e.T1), num(e.T2)}},
                 {"identity_error", num(e.identity_error)},
                 {"X_trials", num(laws.x_trials)},
                 {"Y_trials", num(laws.y_trials)}});
    return kExitOk;
  }
  if (a.model == "sbm") {
    if (community_count(g) != 2)
      throw InvalidArgument("predict --model sbm needs a graph labelled with two communities");
    const DensityEstimate d = estimate_densities(g);
    const double p = a.p.value_or(d.p);
    const double q = a.q.value_or(d.q);
    emit(G, json{{"target", *a.target},
                 {"p", num(p)},
                 {"q", num(q)},
                 {"estimated_p", num(d.p)},
                 {"estimated_q", num(d.q)},
                 {"prediction", to_json(sbm_prediction(p, q, realized_base(g, *a.target)))},
                 {"bpq", to_json(bpq_solve(p, q))}});
    return kExitOk;
  }
  throw InvalidArgument("--model must be er or sbm");
}

struct CoupleArgs {
  GraphArgs graph;
  std::size_t reps = 10000;
};

inline int cmd_couple(const Globals& G, const CoupleArgs& a) {
  const WeightedGraph g = load(a.graph.graph, a.graph.target);
  const Partition P = canonical_partition(g, a.graph.target, a.graph.use_labels);
  const QuotientChain Q = build_quotient(g, P);
  const AssumptionReport r = assess(g, a.graph.target, P);
  const MismatchEstimate m = estimate_mismatch(CouplingModel(g, P, Q), a.reps, G.seed);
  const bool checked = r.theorem_bound < 1.0;
  emit(G, json{{"target", a.graph.target},
               {"reps", m.reps},
               {"seed", G.seed},
               {"mismatch_probability", num(m.p_hat)},
               {"mismatch_ci", num(m.ci)},
               {"mean_abs_gap", num(m.mean_abs_gap)},
               {"T_mean", num(m.T.mean)},
               {"T_ci", num(m.T.ci_halfwidth)},
               {"T_prime_mean", num(m.T_prime.mean)},
               {"T_prime_ci", num(m.T_prime.ci_halfwidth)},
               {"epsilon", num(r.epsilon)},
               {"theorem_bound", num(r.theorem_bound)},
               {"bound_checked", checked},
               {"within_bound", !checked || m.p_hat <= r.theorem_bound + 3.0 * m.ci}});
  return std::isinf(r.epsilon) ? kExitDegenerate : kExitOk;
}

struct DetectArgs {
  GraphArgs graph;
  std::optional<double> p, q;
};

inline int cmd_detect(const Globals& G, const DetectArgs& a) {
  const WeightedGraph g = load(a.graph.graph, a.graph.target);
  const Vertex v = a.graph.target;
  const HittingProfile h = hitting_profile(g, v);
  const std::size_t k = community_count(g);
  ClusterPrediction pred;
  if (a.p && a.q) {
    pred = sbm_prediction(*a.p, *a.q, realized_base(g, v));
  } else if (k == 2 && g.unit_weights()) {
    const DensityEstimate d = estimate_densities(g);
    pred = sbm_prediction(d.p, d.q, realized_base(g, v));
  } else if (k > 2) {
    const Partition P = canonical_partition(g, v, true);
    pred = quotient_prediction(g, P, quotient_hitting(build_quotient(g, P)));
  } else if (g.unit_weights()) {
    pred = er_prediction(g, v).prediction;
  } else {
    const Partition P = canonical_partition(g, v, false);
    pred = quotient_prediction(g, P, quotient_hitting(build_quotient(g, P)));
  }
  const DetectionResult det = classify_vertices(h, pred);

  if (format_or(G, "json") == "csv") {
    std::string out = "vertex,hitting,class,inferred_community,true_community\n";
    for (Vertex w = 0; w < g.size(); ++w) {
      out += std::to_string(w) + "," + format_double(h.values[w]) + ",";
      out += det.cls[w] < 0 ? std::string("target") : pred.classes[static_cast<std::size_t>(det.cls[w])].name;
      out += ",";
      if (w == v)
        out += "0";
      else if (det.community_defined)
        out += std::to_string(det.community[w]);
      out += ",";
      if (g.has_labels()) out += std::to_string(g.label(w));
      out += "\n";
    }
    emit(G, out);
    return kExitOk;
  }
  std::map<std::string, std::size_t> counts;
  for (Vertex w = 0; w < g.size(); ++w)
    if (det.cls[w] >= 0) ++counts[pred.classes[static_cast<std::size_t>(det.cls[w])].name];
  json out = {{"target", v},
              {"prediction", to_json(pred)},
              {"class_counts", counts},
              {"community_defined", det.community_defined},
              {"adjacency_accuracy", num(adjacency_accuracy(det, g))}};
  std::optional<double> acc;
  if (g.has_labels()) acc = detection_accuracy(det, *g.labels());
  out["community_accuracy"] = acc ? num(*acc) : json();
  emit(G, out);
  return kExitOk;
}

struct VerifyArgs {
  GraphArgs graph;
  std::optional<double> p, q;
  std::string profile;
};

inline int cmd_verify(const Globals& G, const VerifyArgs& a) {
  const WeightedGraph g = load(a.graph.graph, a.graph.target);
  VerifyOptions opt;
  opt.use_labels = a.graph.use_labels;
  opt.p = a.p;
  opt.q = a.q;
  const VerifyReport r = verify_instance(g, a.graph.target, opt);
  if (!a.profile.empty()) write_text(a.profile, profile_to_csv(g, r.profile));
  emit(G, to_json(r));
  return std::isinf(r.assumptions.epsilon) ? kExitDegenerate : kExitOk;
}

inline void add_graph_options(CLI::App* sub, GraphArgs& a, bool labels) {
  sub->add_option("--graph", a.graph, "graph file (.json or edge-list .csv)")->required();
  sub->add_option("--target", a.target, "target vertex")->required();
  if (labels) sub->add_flag("--use-labels", a.use_labels, "split blocks by community label");
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"Hitting times of random walks, lumped chains and cluster predictions", "hitlab"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals G;
  app.add_option("--seed", G.seed, "random seed");
  app.add_option("--out", G.out, "output file (stdout when omitted)");
  app.add_option("--format", G.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  GenArgs gen;
  auto* s_gen = app.add_subcommand("gen", "sample an ER or SBM graph");
  s_gen->add_option("--model", gen.model, "er or sbm")->required()->check(CLI::IsMember({"er", "sbm"}));
  s_gen->add_option("--n", gen.n, "vertex count (ER) or per-community size (SBM)");
  s_gen->add_option("--p", gen.p, "edge probability (within-community for SBM)");
  s_gen->add_option("--q", gen.q, "across-community edge probability");
  s_gen->add_option("--sizes", gen.sizes, "community sizes, comma separated")->delimiter(',');

  GraphArgs hit;
  auto* s_hit = app.add_subcommand("hit", "exact hitting-time profile");
  add_graph_options(s_hit, hit, false);

  GraphArgs quo;
  auto* s_quo = app.add_subcommand("quotient", "lumped chain of the canonical partition");
  add_graph_options(s_quo, quo, true);

  GraphArgs ass;
  auto* s_ass = app.add_subcommand("assume", "epsilon, K1, K2, lambda and the coupling bound");
  add_graph_options(s_ass, ass, true);

  PredictArgs pre;
  auto* s_pre = app.add_subcommand("predict", "closed-form cluster predictions");
  s_pre->add_option("--model", pre.model, "er or sbm")->check(CLI::IsMember({"er", "sbm"}));
  s_pre->add_option("--graph", pre.graph, "graph file");
  s_pre->add_option("--target", pre.target, "target vertex");
  s_pre->add_flag("--closed-form", pre.closed_form, "evaluate the two-community levels only");
  s_pre->add_option("--p", pre.p, "within-community probability");
  s_pre->add_option("--q", pre.q, "across-community probability");
  s_pre->add_option("--base", pre.base, "base level 2|E|/deg(v) - 1");

  CoupleArgs cpl;
  auto* s_cpl = app.add_subcommand("couple", "simulate the walk coupled to the lumped chain");
  add_graph_options(s_cpl, cpl.graph, true);
  s_cpl->add_option("--reps", cpl.reps, "number of coupled runs");

  DetectArgs det;
  auto* s_det = app.add_subcommand("detect", "classify vertices by hitting time");
  add_graph_options(s_det, det.graph, false);
  s_det->add_option("--p", det.p, "within-community probability");
  s_det->add_option("--q", det.q, "across-community probability");

  VerifyArgs ver;
  auto* s_ver = app.add_subcommand("verify", "full per-instance report");
  add_graph_options(s_ver, ver.graph, true);
  s_ver->add_option("--p", ver.p, "within-community probability");
  s_ver->add_option("--q", ver.q, "across-community probability");
  s_ver->add_option("--profile", ver.profile, "also write the per-vertex profile CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (s_gen->parsed()) return cmd_gen(G, gen);
    if (s_hit->parsed()) return cmd_hit(G, hit);
    if (s_quo->parsed()) return cmd_quotient(G, quo);
    if (s_ass->parsed()) return cmd_assume(G, ass);
    if (s_pre->parsed()) return cmd_predict(G, pre);
    if (s_cpl->parsed()) return cmd_couple(G, cpl);
    if (s_det->parsed()) return cmd_detect(G, det);
    if (s_ver->parsed()) return cmd_verify(G, ver);
  } catch (const Degenerate& e) {
    std::cerr << "hitlab: degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "hitlab: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

inline int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hitlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hitlab::cli
