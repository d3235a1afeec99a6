#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "hitlab/error.hpp"
#include "hitlab/graph.hpp"
#include "hitlab/parallel.hpp"
#include "hitlab/quotient.hpp"
#include "hitlab/rng.hpp"

namespace hitlab {

inline constexpr std::uint64_t kMaxWalkSteps = 100'000'000;

// z for a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

namespace detail {

// Draws an index from a cumulative weight table by inversion.
inline std::size_t draw_cumulative(const std::vector<double>& cum, Rng& rng) {
  const double u = rng.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::size_t>(it - cum.begin());
}

}  // namespace detail

/// Adjacency lists with cumulative weights for O(log deg) neighbour draws.
class WalkSampler {
 public:
  explicit WalkSampler(const WeightedGraph& g) : nbrs_(g.size()), cum_(g.size()) {
    for (Vertex w = 0; w < g.size(); ++w) {
      const auto r = g.row(w);
      double acc = 0.0;
      for (Vertex x = 0; x < g.size(); ++x)
        if (r[x] > 0.0) {
          acc += r[x];
          nbrs_[w].push_back(x);
          cum_[w].push_back(acc);
        }
      if (nbrs_[w].empty()) throw InvalidArgument("vertex " + std::to_string(w) + " is isolated");
    }
  }

  Vertex step(Vertex w, Rng& rng) const { return nbrs_[w][detail::draw_cumulative(cum_[w], rng)]; }

  std::size_t size() const noexcept { return nbrs_.size(); }

 private:
  std::vector<std::vector<Vertex>> nbrs_;
  std::vector<std::vector<double>> cum_;
};

/// Steps of one walk from w until it first visits v.
inline std::uint64_t sample_hitting(const WalkSampler& walk, Vertex w, Vertex v, Rng& rng) {
  std::uint64_t steps = 0;
  while (w != v) {
    if (++steps > kMaxWalkSteps)
      throw IterationLimit("walk exceeded the step cap without hitting the target");
    w = walk.step(w, rng);
  }
  return steps;
}

inline std::uint64_t sample_hitting(const WeightedGraph& g, Vertex w, Vertex v, std::uint64_t seed) {
  require_vertex(g, w);
  require_vertex(g, v);
  Rng rng(seed);
  return sample_hitting(WalkSampler(g), w, v, rng);
}

struct McEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal approximation
  double std_error = 0.0;
  std::size_t reps = 0;
};

inline McEstimate summarize(const std::vector<double>& xs) {
  McEstimate out;
  out.reps = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  out.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  out.ci_halfwidth = kZ99 * out.std_error;
  return out;
}

/// Replica i runs on Rng::stream(seed, i).
inline McEstimate mc_hitting(const WeightedGraph& g, Vertex w, Vertex v, std::size_t reps,
                             std::uint64_t seed) {
  require_vertex(g, w);
  require_vertex(g, v);
  if (reps < 2) throw InvalidArgument("mc_hitting needs at least two replicas");
  const WalkSampler walk(g);
  std::vector<double> samples(reps);
  parallel_for(reps, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    samples[i] = static_cast<double>(sample_hitting(walk, w, v, rng));
  });
  return summarize(samples);
}

/// Result of one coupled trajectory. decoupled_at is the first step at which
/// the block of X and the lumped walker Y differ; without it T == T_prime.
struct CouplingRun {
  std::uint64_t T = 0;
  std::uint64_t T_prime = 0;
  std::optional<std::uint64_t> decoupled_at;
  bool recoupled = false;  // re-coupling stages are not simulated
};

/// X follows the walk exactly. While Gamma(X) == Y, the next block of X and
/// the next state of Y are drawn from the maximal coupling of r_x = R(x, .)
/// and q(Gamma(x), .): X's next vertex is drawn first; with probability
/// min(r_x(j), q(i, j)) / r_x(j) Y joins block j, otherwise Y draws from the
/// normalised excess (q(i, .) - r_x)^+ and the pair decouples. Afterwards the
/// two move independently.
class CouplingModel {
 public:
  CouplingModel(const WeightedGraph& g, const Partition& P, const QuotientChain& Q)
      : walk_(g), gamma_(P.gamma), target_(P.target()), blocks_(P.block_count()) {
    const Eigen::MatrixXd R = block_rows(g, P);
    const std::size_t n = g.size();
    const auto m1 = static_cast<Eigen::Index>(blocks_);
    accept_.assign(n, std::vector<double>(blocks_, 0.0));
    excess_cum_.assign(n, {});
    tv_.assign(n, 0.0);
    for (Vertex x = 0; x < n; ++x) {
      const auto i = static_cast<Eigen::Index>(gamma_[x]);
      double acc = 0.0;
      std::vector<double> cum(blocks_);
      for (Eigen::Index j = 0; j < m1; ++j) {
        const double r = R(static_cast<Eigen::Index>(x), j);
        const double qij = Q.q(i, j);
        accept_[x][static_cast<std::size_t>(j)] = r > 0.0 ? std::min(1.0, qij / r) : 0.0;
        acc += std::max(0.0, qij - r);
        cum[static_cast<std::size_t>(j)] = acc;
      }
      tv_[x] = acc;
      excess_cum_[x] = std::move(cum);
    }
    q_cum_.assign(blocks_, std::vector<double>(blocks_));
    for (Eigen::Index i = 0; i < m1; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < m1; ++j) {
        acc += Q.q(i, j);
        q_cum_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
      }
    }
  }

  struct Step {
    Vertex x = 0;
    std::size_t y = 0;
    bool coupled = true;
  };

  // One coupled transition from a state with Gamma(x) == Y.
  Step coupled_step(Vertex x, Rng& rng) const {
    Step s;
    s.x = walk_.step(x, rng);
    const std::size_t j = gamma_[s.x];
    if (rng.uniform() < accept_[x][j]) {
      s.y = j;
      return s;
    }
    s.coupled = false;
    s.y = excess_cum_[x].back() > 0.0 ? detail::draw_cumulative(excess_cum_[x], rng) : j;
    return s;
  }

  std::size_t quotient_step(std::size_t y, Rng& rng) const {
    return detail::draw_cumulative(q_cum_[y], rng);
  }

  // d_TV(R(x, .), q(Gamma(x), .)), the per-step decoupling probability at x.
  double decoupling_probability(Vertex x) const { return tv_[x]; }

  CouplingRun run(Vertex w, Rng& rng) const {
    if (w >= gamma_.size()) throw InvalidArgument("start vertex out of range");
    if (gamma_[w] == 0) throw InvalidArgument("coupled run must start outside the target block");
    CouplingRun out;
    Vertex x = w;
    std::size_t y = gamma_[w];
    std::uint64_t k = 0;
    while (true) {
      if (++k > kMaxWalkSteps) throw IterationLimit("coupled run exceeded the step cap");
      const Step s = coupled_step(x, rng);
      x = s.x;
      y = s.y;
      if (!s.coupled) {
        out.decoupled_at = k;
        break;
      }
      if (x == target_) {
        out.T = out.T_prime = k;
        return out;
      }
    }
    // independent phase
    const std::uint64_t split = k;
    bool x_done = x == target_;
    bool y_done = y == 0;
    if (x_done) out.T = split;
    if (y_done) out.T_prime = split;
    while (!x_done || !y_done) {
      if (++k > kMaxWalkSteps) throw IterationLimit("coupled run exceeded the step cap");
      if (!x_done) {
        x = walk_.step(x, rng);
        if (x == target_) {
          x_done = true;
          out.T = k;
        }
      }
      if (!y_done) {
        y = quotient_step(y, rng);
        if (y == 0) {
          y_done = true;
          out.T_prime = k;
        }
      }
    }
    return out;
  }

  Vertex target() const noexcept { return target_; }
  std::size_t size() const noexcept { return gamma_.size(); }

 private:
  WalkSampler walk_;
  std::vector<std::size_t> gamma_;
  Vertex target_;
  std::size_t blocks_;
  std::vector<std::vector<double>> accept_;
  std::vector<std::vector<double>> excess_cum_;
  std::vector<double> tv_;
  std::vector<std::vector<double>> q_cum_;
};

inline CouplingRun coupled_run(const WeightedGraph& g, const Partition& P, Vertex w,
                               std::uint64_t seed) {
  const CouplingModel model(g, P, build_quotient(g, P));
  Rng rng(seed);
  return model.run(w, rng);
}

struct MismatchEstimate {
  double p_hat = 0.0;         // fraction of runs with T != T'
  double ci = 0.0;            // 99% normal half-width on p_hat
  double mean_abs_gap = 0.0;  // mean |T - T'|
  McEstimate T;
  McEstimate T_prime;
  std::size_t reps = 0;
};

/// Replica i draws its start uniformly from the non-target vertices and runs
/// on Rng::stream(seed, i).
inline MismatchEstimate estimate_mismatch(const CouplingModel& model, std::size_t reps,
                                          std::uint64_t seed) {
  if (reps < 100) throw InvalidArgument("estimate_mismatch needs at least 100 replicas");
  const std::size_t n = model.size();
  if (n < 2) throw InvalidArgument("graph has no non-target vertex");
  std::vector<double> t(reps), tp(reps);
  parallel_for(reps, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i);
    Vertex w = static_cast<Vertex>(rng.below(n - 1));
    if (w >= model.target()) ++w;
    const CouplingRun r = model.run(w, rng);
    t[i] = static_cast<double>(r.T);
    tp[i] = static_cast<double>(r.T_prime);
  });
  MismatchEstimate out;
  out.reps = reps;
  double mism = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < reps; ++i) {
    if (t[i] != tp[i]) mism += 1.0;
    gap += std::abs(t[i] - tp[i]);
  }
  const double r = static_cast<double>(reps);
  out.p_hat = mism / r;
  out.ci = kZ99 * std::sqrt(out.p_hat * (1.0 - out.p_hat) / r);
  out.mean_abs_gap = gap / r;
  out.T = summarize(t);
  out.T_prime = summarize(tp);
  return out;
}

inline MismatchEstimate estimate_mismatch(const WeightedGraph& g, const Partition& P,
                                          std::size_t reps, std::uint64_t seed) {
  return estimate_mismatch(CouplingModel(g, P, build_quotient(g, P)), reps, seed);
}

}  // namespace hitlab
