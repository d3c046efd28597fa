#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rrtlab/fdd.hpp"
#include "rrtlab/limit_laws.hpp"
#include "rrtlab/tree.hpp"

namespace rrtlab {

/// floor(log2 n) for n >= 1.
std::uint32_t floor_log2(std::uint64_t n);

/// Fractional part of log2 n.
double epsilon_n(std::uint64_t n);

/// (h - mu_a ln n) / sqrt(sigma2_a ln n); 0 for n == 1 where ln n vanishes.
double normalized_depth(std::uint32_t depth, std::uint64_t n, const LimitParams& params);

struct NormalizedDepthSample {
  std::uint32_t raw_depth = 0;
  double a = 0.0;
  double z = 0.0;
};

/// A vertex that may fall in some FDD window: its degree and normalized depth.
struct MarkedVertex {
  std::uint32_t degree = 0;
  double z = 0.0;
};

/// One replicate's counts over a canonical FDD sequence. exact_counts follow
/// the exact entries in order, tail_counts the tail entries.
struct CountingMeasureSample {
  std::uint64_t n = 0;
  double epsilon_n = 0.0;
  std::vector<std::uint64_t> exact_counts;
  std::vector<std::uint64_t> tail_counts;

  /// Counts of all entries, exact first.
  std::vector<std::uint64_t> all() const;
};

/// Vertices of degree >= floor(log2 n) + min_level, marked with their depth
/// normalized by the a = 1 constants. Depths are only computed for those.
std::vector<MarkedVertex> high_degree_vertices(const RecursiveTree& tree,
                                               std::span<const std::uint32_t> degree_by_label,
                                               std::int32_t min_level);

/// Counts from a candidate list that contains every vertex the FDD can see.
CountingMeasureSample count_measures(std::span<const MarkedVertex> candidates, std::uint64_t n,
                                     const CanonicalFdd& fdd);

/// Convenience: full pass over a tree.
CountingMeasureSample count_measures(const RecursiveTree& tree, const CanonicalFdd& fdd);

/// Number of vertices per level j = degree - floor(log2 n), for j in
/// [min_level, max_level], with everything below min_level in `underflow`.
struct LevelHistogram {
  std::int32_t min_level = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;

  std::uint64_t total() const;
};

LevelHistogram level_histogram(std::span<const std::uint32_t> degree_by_label, std::uint64_t n,
                               std::int32_t min_level);

/// x (x-1) ... (x-a+1); 1 for a == 0.
double falling_factorial(double x, std::uint32_t a);

/// Replicate average of prod_k (count_k)_{a_k} over all FDD entries.
double factorial_moment_estimate(std::span<const CountingMeasureSample> samples,
                                 std::span<const std::uint32_t> exponents);

/// n_l = round(2^{l + eps}) for l = l_min..l_max. Throws std::invalid_argument
/// when eps is outside [0,1], l_min < 1, or n_l does not fit in 32 bits.
std::vector<std::uint64_t> subsequence_schedule(double epsilon, std::uint32_t l_min,
                                                std::uint32_t l_max);

}  // namespace rrtlab
