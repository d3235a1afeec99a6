#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/hitting.hpp"
#include "hitlab/theory.hpp"

namespace hitlab {

struct Clusters1d {
  std::vector<int> labels;  // cluster index per input value, 0 = lowest values
  std::vector<double> centers;
};

/// Sorts the values and cuts at the k - 1 widest gaps between neighbours in
/// sorted order. Equal gaps are cut at the lower position first.
inline Clusters1d cluster_1d(const std::vector<double>& values, std::size_t k) {
  if (k < 1) throw InvalidArgument("cluster_1d needs k >= 1");
  const std::set<double> distinct(values.begin(), values.end());
  if (k > distinct.size())
    throw InvalidArgument("cluster_1d: k exceeds the number of distinct values");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // gap g sits between sorted positions g and g + 1
  std::vector<std::size_t> gaps(values.size() > 0 ? values.size() - 1 : 0);
  std::iota(gaps.begin(), gaps.end(), 0);
  const auto width = [&](std::size_t g) { return values[order[g + 1]] - values[order[g]]; };
  std::stable_sort(gaps.begin(), gaps.end(),
                   [&](std::size_t a, std::size_t b) { return width(a) > width(b); });
  std::vector<std::size_t> cuts(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(k - 1));
  std::sort(cuts.begin(), cuts.end());

  Clusters1d out;
  out.labels.assign(values.size(), 0);
  out.centers.assign(k, 0.0);
  std::vector<std::size_t> counts(k, 0);
  std::size_t cluster = 0, next_cut = 0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    out.labels[order[pos]] = static_cast<int>(cluster);
    out.centers[cluster] += values[order[pos]];
    ++counts[cluster];
    if (next_cut < cuts.size() && cuts[next_cut] == pos) {
      ++cluster;
      ++next_cut;
    }
  }
  for (std::size_t c = 0; c < k; ++c) out.centers[c] /= static_cast<double>(counts[c]);
  return out;
}

/// Per-vertex assignment to predicted levels. Entries for the target are -1.
/// community is relative to the target (0 = the target's own community) and
/// is -1 everywhere when the prediction cannot tell communities apart.
struct DetectionResult {
  Vertex target = 0;
  std::vector<int> cls;
  std::vector<int> community;
  std::vector<int> adjacent;
  bool community_defined = false;
};

/// Nearest predicted value wins; ties go to the class with the smaller
/// offset. When two classes with different communities share the same
/// predicted value (p = q), classes are merged per adjacency and communities
/// are left undefined.
inline DetectionResult classify_vertices(const HittingProfile& profile,
                                         const ClusterPrediction& pred) {
  if (pred.classes.size() < 2) throw InvalidArgument("prediction needs at least two classes");
  const std::size_t n = profile.size();

  std::vector<std::size_t> usable(pred.classes.size());
  std::iota(usable.begin(), usable.end(), 0);
  std::stable_sort(usable.begin(), usable.end(), [&](std::size_t a, std::size_t b) {
    return pred.classes[a].offset < pred.classes[b].offset;
  });

  bool community_defined = false;
  for (const auto& c : pred.classes)
    if (c.community >= 0) community_defined = true;
  for (std::size_t a = 0; a < pred.classes.size(); ++a)
    for (std::size_t b = a + 1; b < pred.classes.size(); ++b) {
      const auto& ca = pred.classes[a];
      const auto& cb = pred.classes[b];
      if (ca.community != cb.community && std::abs(ca.offset - cb.offset) <= 1e-12)
        community_defined = false;
    }
  if (!community_defined) {
    // one representative per (adjacency, offset) level
    std::vector<std::size_t> merged;
    for (std::size_t c : usable) {
      bool dup = false;
      for (std::size_t m : merged)
        if (pred.classes[m].adjacent == pred.classes[c].adjacent &&
            std::abs(pred.classes[m].offset - pred.classes[c].offset) <= 1e-12)
          dup = true;
      if (!dup) merged.push_back(c);
    }
    usable = std::move(merged);
  }

  DetectionResult out;
  out.target = profile.target;
  out.community_defined = community_defined;
  out.cls.assign(n, -1);
  out.community.assign(n, -1);
  out.adjacent.assign(n, -1);
  for (Vertex w = 0; w < n; ++w) {
    if (w == profile.target) continue;
    std::size_t best = usable.front();
    double best_d = std::abs(profile.values[w] - pred.value(best));
    for (std::size_t c : usable) {
      const double d = std::abs(profile.values[w] - pred.value(c));
      if (d < best_d) {
        best = c;
        best_d = d;
      }
    }
    out.cls[w] = static_cast<int>(best);
    out.adjacent[w] = pred.classes[best].adjacent ? 1 : 0;
    if (community_defined) out.community[w] = pred.classes[best].community;
  }
  return out;
}

/// Fraction of non-target vertices whose inferred community matches the
/// truth, maximised over relabelings of the inferred communities. Returns
/// nullopt when the result carries no community information.
inline std::optional<double> detection_accuracy(const DetectionResult& result,
                                                const std::vector<int>& truth) {
  if (truth.size() != result.community.size())
    throw InvalidArgument("detection_accuracy: truth size does not match result");
  if (!result.community_defined) return std::nullopt;

  std::map<int, int> inferred_ids, truth_ids;
  for (Vertex w = 0; w < truth.size(); ++w) {
    if (w == result.target) continue;
    inferred_ids.emplace(result.community[w], 0);
    truth_ids.emplace(truth[w], 0);
  }
  int next = 0;
  for (auto& [k, id] : inferred_ids) id = next++;
  next = 0;
  for (auto& [k, id] : truth_ids) id = next++;
  const std::size_t slots = std::max(inferred_ids.size(), truth_ids.size());
  if (slots > 9) throw InvalidArgument("detection_accuracy supports at most 9 communities");

  // confusion counts, then brute force over assignments inferred -> truth
  std::vector<std::vector<double>> hits(slots, std::vector<double>(slots, 0.0));
  double scored = 0.0;
  for (Vertex w = 0; w < truth.size(); ++w) {
    if (w == result.target) continue;
    hits[static_cast<std::size_t>(inferred_ids[result.community[w]])]
        [static_cast<std::size_t>(truth_ids[truth[w]])] += 1.0;
    scored += 1.0;
  }
  std::vector<std::size_t> perm(slots);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double agree = 0.0;
    for (std::size_t a = 0; a < slots; ++a) agree += hits[a][perm[a]];
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return scored > 0 ? best / scored : 1.0;
}

/// Fraction of non-target vertices whose inferred adjacency to the target
/// matches the graph.
inline double adjacency_accuracy(const DetectionResult& result, const WeightedGraph& g) {
  double agree = 0.0, scored = 0.0;
  for (Vertex w = 0; w < g.size(); ++w) {
    if (w == result.target) continue;
    scored += 1.0;
    if ((result.adjacent[w] == 1) == g.adjacent(w, result.target)) agree += 1.0;
  }
  return scored > 0 ? agree / scored : 1.0;
}

/// Fraction of non-target vertices assigned to the class expected for them;
/// expected[w] = -1 entries are skipped.
inline double class_accuracy(const DetectionResult& result, const std::vector<int>& expected) {
  double agree = 0.0, scored = 0.0;
  for (Vertex w = 0; w < expected.size(); ++w) {
    if (w == result.target || expected[w] < 0) continue;
    scored += 1.0;
    if (result.cls[w] == expected[w]) agree += 1.0;
  }
  return scored > 0 ? agree / scored : 1.0;
}

/// Expected class of each vertex for a canonical-partition layout: block i
/// maps to class i - 1, which is how both sbm_prediction (two communities)
/// and quotient_prediction order their classes.
inline std::vector<int> expected_classes(const Partition& P) {
  std::vector<int> out(P.gamma.size(), -1);
  for (Vertex w = 0; w < P.gamma.size(); ++w)
    if (P.gamma[w] != 0) out[w] = static_cast<int>(P.gamma[w]) - 1;
  return out;
}

}  // namespace hitlab
