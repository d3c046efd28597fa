#include "rrtlab/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrtlab/limit_laws.hpp"

namespace rrtlab {

const char* to_string(GofKind kind) {
  switch (kind) {
    case GofKind::kKolmogorovSmirnov: return "ks";
    case GofKind::kTotalVariation: return "tv";
    case GofKind::kChiSquare: return "chi2";
  }
  return "unknown";
}

double ks_vs_normal(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("KS needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t len = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

double chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    const double diff = static_cast<double>(observed[i]) - expected[i];
    s += diff * diff / expected[i];
  }
  return s;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("correlation: size mismatch");
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

MeanStat mean_with_error(std::span<const double> values) {
  MeanStat out;
  out.count = values.size();
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace rrtlab
