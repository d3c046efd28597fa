#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rrtlab/fdd.hpp"

namespace rrtlab {

/// Raised when a numerical routine cannot reach its requested accuracy.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Centering and scaling constants for depths of vertices whose degree is
/// about a*log2(n): mu_a = 1 - a*log2(e)/2, sigma2_a = 1 - a*log2(e)/4.
struct LimitParams {
  double a = 0.0;
  double mu_a = 1.0;
  double sigma2_a = 1.0;
};

/// Throws std::invalid_argument unless 0 <= a <= 1.
LimitParams limit_params(double a);

/// Standard normal CDF through erfc.
double normal_cdf(double x);

/// Gaussian measure of an interval.
double gaussian_measure(const Interval& b);

/// Intensity 2^{-x} ln 2 of the limiting degree point process.
double ppp_intensity(double x);

struct LimitPrediction {
  double epsilon = 0.0;
  std::vector<double> poisson_means;  // one per FDD entry
};

/// Limiting Poisson means: 2^{-j+eps-1} Phi(B) for exact entries and
/// 2^{-j+eps} Phi(B) for tail entries. Throws for eps outside [0,1].
LimitPrediction poisson_means(const CanonicalFdd& fdd, double epsilon);

/// P(Bin(t, 1/2) < threshold). Exact pmf summation for t <= 1000, the
/// regularized incomplete beta function above that.
double binomial_half_cdf_below(std::uint64_t t, double threshold);

/// P(Bin(t,1/2) < x sqrt(ln n) + ln n).
double g_fn(std::uint64_t t, double x, std::uint64_t n);

/// P(Bin(t-d,1/2) < l) when t >= d, else 0.
double g_tilde_fn(std::uint64_t t, std::uint64_t d, double l);

struct IntbResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double quadrature_error = 0.0;
};

/// E[Phi((sqrt(1+b^2) x - N)/b)] for standard normal N against Phi(x).
/// Throws NumericFailure if adaptive quadrature does not converge, and
/// std::invalid_argument for b <= 0.
IntbResult intb_check(double x, double b);

/// Single summand e^{-2^{-m+eps}} 2^{-(m+1-eps)k} / k!.
double m_eps_term(std::int64_t m, std::uint32_t k, double epsilon);

struct MEpsValue {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the omitted |m| > trunc terms
  bool certified = true;    // false when the lower tail bound is unavailable
};

/// P(M_eps = k), truncated to m in [-trunc, trunc].
MEpsValue m_eps_pmf(std::uint32_t k, double epsilon, std::uint32_t trunc = 60);

/// Sum of m_eps_pmf(k) over k = 1..k_max.
double m_eps_total(double epsilon, std::uint32_t trunc = 60, std::uint32_t k_max = 400);

/// Limiting joint factorial moment of the counts of `fdd` with the given
/// exponents (one per entry, sum >= 1).
double factorial_moment_prediction(const CanonicalFdd& fdd, std::span<const std::uint32_t> exponents,
                                   double epsilon);

// Per-step probabilities for k tracked trees among m, before any two of them
// have met. p: exact chain, q: independent-copies comparison.
double p_m0(std::uint64_t m, std::uint32_t k);
double p_m1(std::uint64_t m, std::uint32_t k);
double q_m0(std::uint64_t m, std::uint32_t k);
double q_m1(std::uint64_t m, std::uint32_t k);

struct Pm01Scan {
  std::uint32_t k = 0;
  std::uint64_t m_max = 0;
  double c = 0.0;               // constant used for the bounds
  double sup_lower = 0.0;       // sup_m m^2 (q0 - p0) / q0
  double sup_upper = 0.0;       // sup_m m (p1 - q1) / q1
  bool holds = false;
  std::uint64_t first_failure = 0;  // 0 when all m pass
};

/// Checks q0 > p0 > q0 (1 - c/m^2) and q1 < p1 < q1 (1 + c/m) for
/// m in [k+2, m_max] with exact 128-bit integer arithmetic. The constant c is
/// the smallest multiple of 1e-4 strictly above both suprema.
Pm01Scan pm01_scan(std::uint32_t k, std::uint64_t m_max);

}  // namespace rrtlab
