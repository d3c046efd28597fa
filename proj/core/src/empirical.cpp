#include "rrtlab/empirical.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rrtlab {

std::uint32_t floor_log2(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("floor_log2(0)");
  return static_cast<std::uint32_t>(std::bit_width(n) - 1);
}

double epsilon_n(std::uint64_t n) {
  return std::log2(static_cast<double>(n)) - static_cast<double>(floor_log2(n));
}

double normalized_depth(std::uint32_t depth, std::uint64_t n, const LimitParams& params) {
  if (n <= 1) return 0.0;
  const double l = std::log(static_cast<double>(n));
  return (static_cast<double>(depth) - params.mu_a * l) / std::sqrt(params.sigma2_a * l);
}

std::vector<std::uint64_t> CountingMeasureSample::all() const {
  std::vector<std::uint64_t> out(exact_counts);
  out.insert(out.end(), tail_counts.begin(), tail_counts.end());
  return out;
}

std::vector<MarkedVertex> high_degree_vertices(const RecursiveTree& tree,
                                               std::span<const std::uint32_t> degree_by_label,
                                               std::int32_t min_level) {
  const std::uint64_t n = tree.size();
  const std::int64_t floor_d = static_cast<std::int64_t>(floor_log2(n)) + min_level;
  const auto params = limit_params(1.0);
  std::vector<MarkedVertex> out;
  for (Label v = 1; v <= n; ++v) {
    const std::uint32_t d = degree_by_label[v];
    if (static_cast<std::int64_t>(d) >= floor_d)
      out.push_back({d, normalized_depth(depth_of(tree, v), n, params)});
  }
  return out;
}

CountingMeasureSample count_measures(std::span<const MarkedVertex> candidates, std::uint64_t n,
                                     const CanonicalFdd& fdd) {
  CountingMeasureSample out;
  out.n = n;
  out.epsilon_n = epsilon_n(n);
  const std::int64_t base = floor_log2(n);
  for (const auto& e : fdd.entries()) {
    const std::int64_t target = base + e.level;
    std::uint64_t count = 0;
    for (const auto& c : candidates) {
      const auto d = static_cast<std::int64_t>(c.degree);
      if ((e.tail ? d >= target : d == target) && e.interval.contains(c.z)) ++count;
    }
    (e.tail ? out.tail_counts : out.exact_counts).push_back(count);
  }
  return out;
}

CountingMeasureSample count_measures(const RecursiveTree& tree, const CanonicalFdd& fdd) {
  const auto deg = degrees(tree);
  const auto marked = high_degree_vertices(tree, deg, fdd.size() == 0 ? 0 : fdd.min_level());
  return count_measures(marked, tree.size(), fdd);
}

std::uint64_t LevelHistogram::total() const {
  std::uint64_t t = underflow;
  for (auto c : counts) t += c;
  return t;
}

LevelHistogram level_histogram(std::span<const std::uint32_t> degree_by_label, std::uint64_t n,
                               std::int32_t min_level) {
  LevelHistogram h;
  h.min_level = min_level;
  const std::int64_t base = floor_log2(n);
  for (std::uint64_t v = 1; v <= n; ++v) {
    const std::int64_t j = static_cast<std::int64_t>(degree_by_label[v]) - base;
    if (j < min_level) {
      ++h.underflow;
      continue;
    }
    const auto slot = static_cast<std::size_t>(j - min_level);
    if (h.counts.size() <= slot) h.counts.resize(slot + 1, 0);
    ++h.counts[slot];
  }
  return h;
}

double falling_factorial(double x, std::uint32_t a) {
  double r = 1.0;
  for (std::uint32_t i = 0; i < a; ++i) r *= x - i;
  return r;
}

double factorial_moment_estimate(std::span<const CountingMeasureSample> samples,
                                 std::span<const std::uint32_t> exponents) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  std::uint64_t total_order = 0;
  for (auto a : exponents) total_order += a;
  if (total_order == 0) throw std::invalid_argument("exponents must sum to at least 1");
  double sum = 0.0;
  for (const auto& s : samples) {
    const auto counts = s.all();
    if (counts.size() != exponents.size())
      throw std::invalid_argument("need one exponent per FDD entry");
    double prod = 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
      prod *= falling_factorial(static_cast<double>(counts[i]), exponents[i]);
    sum += prod;
  }
  return sum / static_cast<double>(samples.size());
}

std::vector<std::uint64_t> subsequence_schedule(double epsilon, std::uint32_t l_min,
                                                std::uint32_t l_max) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0,1]");
  if (l_min < 1) throw std::invalid_argument("l_min must be at least 1");
  if (l_max < l_min) throw std::invalid_argument("l_max < l_min");
  std::vector<std::uint64_t> out;
  for (std::uint32_t l = l_min; l <= l_max; ++l) {
    const double x = std::round(std::exp2(static_cast<double>(l) + epsilon));
    if (!(x < 4294967296.0))
      throw std::invalid_argument("schedule entry 2^" + std::to_string(l + epsilon) +
                                  " overflows 32-bit labels");
    out.push_back(static_cast<std::uint64_t>(x));
  }
  return out;
}

}  // namespace rrtlab
