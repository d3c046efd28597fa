#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "rrtlab/empirical.hpp"
#include "rrtlab/fdd.hpp"
#include "rrtlab/gof.hpp"
#include "rrtlab/tracked.hpp"

namespace rrtlab {

/// 0 means one worker per hardware thread.
unsigned resolve_workers(unsigned requested);

/// Calls fn(worker, index) for every index in [begin, end), spreading chunks
/// of indices over `workers` threads. fn must only touch per-worker state.
void parallel_for(std::uint64_t begin, std::uint64_t end, unsigned workers,
                  const std::function<void(unsigned, std::uint64_t)>& fn);

/// Runs fn(index) for index in [0, count) and returns results in index order,
/// so the output never depends on the number of workers.
template <class T, class F>
std::vector<T> run_replicates(std::uint64_t count, unsigned workers, F&& fn) {
  std::vector<T> out(count);
  parallel_for(0, count, workers, [&](unsigned, std::uint64_t i) { out[i] = fn(i); });
  return out;
}

// ---------------------------------------------------------------------------
// Depths of vertices 1..k in the coalescent tree, optionally conditioned on
// degrees d(i) >= floor(a_i log2 n) + b_i by rejection.

struct ConditionalDepthConfig {
  std::uint32_t n = 1u << 20;
  std::uint32_t k = 1;
  std::vector<double> a{0.0};
  std::vector<std::int32_t> b{0};
  /// Fixed number of trials; if 0, run batches until `min_retained` samples.
  std::uint64_t trials = 0;
  std::uint64_t min_retained = 2000;
  std::uint64_t max_trials = 1ull << 36;
  std::uint64_t batch = 1ull << 22;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  TrackedMode mode = TrackedMode::kSkip;
  double ks_threshold = 0.05;
  /// Retained counts below this are flagged as underpowered.
  std::uint64_t underpowered_below = 100;
};

struct ConditionalDepthResult {
  std::vector<std::uint32_t> thresholds;  // m_i
  std::uint64_t trials = 0;
  std::uint64_t retained = 0;
  double acceptance = 0.0;
  /// acceptance * 2^{sum m_i}; tends to 1 for a_i < 1 and is bounded for a_i = 1.
  double scaled_acceptance = 0.0;
  std::vector<std::vector<std::uint32_t>> depth;  // [vertex][sample]
  std::vector<std::vector<double>> z;             // [vertex][sample]
  std::vector<GofReport> ks;                      // per vertex
  std::vector<double> correlations;               // pairs (i<j) in lexicographic order
  bool underpowered = false;
};

ConditionalDepthResult conditional_depth_experiment(const ConditionalDepthConfig& config);

// ---------------------------------------------------------------------------
// Depth gained after the chain is cut at ceil(ln^2 n) trees.

struct H2Config {
  std::uint32_t n = 1u << 16;
  std::uint32_t k = 1;
  std::uint32_t vertex = 1;
  std::vector<std::uint32_t> min_degree;  // empty or size k
  double factor = 0.5;                    // event h2 >= factor * sqrt(ln n)
  std::uint32_t cutoff = 0;               // 0 means ceil(ln^2 n)
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

struct H2Result {
  std::uint32_t n = 0;
  std::uint32_t cutoff = 0;
  bool degenerate = false;
  double threshold = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t hits = 0;
  double probability = 0.0;
  double stderr_ = 0.0;
  double mean_h2 = 0.0;  // over replicates meeting the degree conditions
};

H2Result h2_negligibility_experiment(const H2Config& config);

// ---------------------------------------------------------------------------
// Last step at which two of the vertices 1..k were selected together.

struct TauConfig {
  std::uint32_t n = 1u << 12;
  std::uint32_t k = 2;
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool full_chain = true;  // run_kingman rather than the tracked sampler
};

struct TauResult {
  double log_squared = 0.0;  // ln^2 n, not rounded
  std::uint64_t exceed = 0;  // replicates with tau_k > ln^2 n
  double probability = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;  // 2 k^2 / ln^2 n
};

TauResult tau_experiment(const TauConfig& config);

// ---------------------------------------------------------------------------
// One pass over independent random recursive trees collecting counting
// measures, the maximum degree set and the root degree.

struct TreePassConfig {
  std::uint32_t n = 1u << 20;
  std::uint64_t replicates = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<CanonicalFdd> fdds;
};

struct TreeReplicate {
  std::vector<CountingMeasureSample> counts;  // one per FDD
  std::uint32_t root_degree = 0;
  std::uint32_t max_degree = 0;
  /// Normalized depths (a = 1) of the maximum degree vertices, in uniformly
  /// random order drawn after the tree.
  std::vector<double> argmax_z;
};

struct TreePassResult {
  std::uint32_t n = 0;
  double epsilon = 0.0;
  std::vector<TreeReplicate> replicates;

  std::vector<CountingMeasureSample> samples(std::size_t fdd) const;
  /// Replicate mean of each count of FDD `fdd`, exact entries first.
  std::vector<MeanStat> mean_counts(std::size_t fdd) const;
  /// Empirical pmf of |M_n| indexed by multiplicity (entry 0 is always 0).
  std::vector<double> multiplicity_pmf() const;
  /// z values of the i-th maximum degree vertex (0-based), over replicates
  /// with at least i+1 of them.
  std::vector<double> argmax_coordinate(std::size_t i) const;
};

TreePassResult tree_pass(const TreePassConfig& config);

/// TV distance between an empirical multiplicity pmf and P(M_eps = .).
double multiplicity_tv(std::span<const double> empirical, double epsilon, std::uint32_t trunc = 60);

}  // namespace rrtlab
