#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rrtlab {

enum class GofKind { kKolmogorovSmirnov, kTotalVariation, kChiSquare };

const char* to_string(GofKind kind);

/// Goodness-of-fit statistic together with the threshold it is judged by.
struct GofReport {
  GofKind kind = GofKind::kKolmogorovSmirnov;
  double value = 0.0;
  std::uint64_t sample_size = 0;
  std::string reference;  // human readable description of the reference law
  double threshold = 0.0;

  bool passed() const { return value < threshold; }
};

/// sup_x |F_n(x) - Phi(x)|. Sorts a copy of the samples.
double ks_vs_normal(std::span<const double> samples);

/// Half the l1 distance between two pmfs on {0,1,...}; missing entries are 0.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Pearson statistic sum (O - E)^2 / E over cells with E > 0.
double chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected);

/// Sample Pearson correlation; 0 when either variance vanishes.
double correlation(std::span<const double> x, std::span<const double> y);

struct MeanStat {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t count = 0;
};

MeanStat mean_with_error(std::span<const double> values);

}  // namespace rrtlab
