#include "rrtlab/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace rrtlab {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLog2e = std::numbers::log2e;

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in [0,1]");
}

double log_m_eps_term(std::int64_t m, std::uint32_t k, double epsilon) {
  const double u = std::exp2(epsilon - static_cast<double>(m));
  return -u - (static_cast<double>(m) + 1.0 - epsilon) * k * kLn2 - std::lgamma(k + 1.0);
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

using i128 = __int128;

i128 ipow(i128 base, std::uint32_t e) {
  i128 r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

LimitParams limit_params(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in [0,1]");
  return {a, 1.0 - a * kLog2e / 2.0, 1.0 - a * kLog2e / 4.0};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_measure(const Interval& b) {
  // Use the upper tail when both ends are positive to keep precision.
  if (b.lower >= 0.0) return 0.5 * std::erfc(b.lower / std::numbers::sqrt2) -
                             0.5 * std::erfc(b.upper / std::numbers::sqrt2);
  return normal_cdf(b.upper) - normal_cdf(b.lower);
}

double ppp_intensity(double x) { return std::exp2(-x) * kLn2; }

LimitPrediction poisson_means(const CanonicalFdd& fdd, double epsilon) {
  check_epsilon(epsilon);
  LimitPrediction out;
  out.epsilon = epsilon;
  for (const auto& e : fdd.entries()) {
    const double scale = std::exp2(-static_cast<double>(e.level) + epsilon - (e.tail ? 0.0 : 1.0));
    out.poisson_means.push_back(scale * gaussian_measure(e.interval));
  }
  return out;
}

double binomial_half_cdf_below(std::uint64_t t, double threshold) {
  // Strict inequality: X < threshold iff X <= ceil(threshold) - 1.
  const double top = std::ceil(threshold) - 1.0;
  if (top < 0.0) return 0.0;
  if (top >= static_cast<double>(t)) return 1.0;
  const auto kmax = static_cast<std::uint64_t>(top);
  if (t > 1000) {
    return boost::math::ibeta(static_cast<double>(t - kmax), static_cast<double>(kmax) + 1.0, 0.5);
  }
  const double log_norm = std::lgamma(t + 1.0) - static_cast<double>(t) * kLn2;
  double sum = 0.0;
  double carry = 0.0;
  for (std::uint64_t j = 0; j <= kmax; ++j) {
    const double term = std::exp(log_norm - std::lgamma(j + 1.0) - std::lgamma(t - j + 1.0));
    const double y = term - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return std::min(sum, 1.0);
}

double g_fn(std::uint64_t t, double x, std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("g_fn needs n >= 2");
  const double l = std::log(static_cast<double>(n));
  return binomial_half_cdf_below(t, x * std::sqrt(l) + l);
}

double g_tilde_fn(std::uint64_t t, std::uint64_t d, double l) {
  if (t < d) return 0.0;
  return binomial_half_cdf_below(t - d, l);
}

IntbResult intb_check(double x, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("intb_check needs b > 0");
  const double s = std::sqrt(1.0 + b * b) * x;
  auto f = [&](double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi) * normal_cdf((s - z) / b);
  };
  // The normal density is below 1e-31 outside [-12, 12], so the integral is
  // taken over that range; the omitted mass 2 Phi(-12) joins the error
  // estimate. The second factor switches from 1 to 0 near z = s over a width
  // of order b, so the range is split there.
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr double kEdge = 12.0;
  const double mid = std::clamp(s, -kEdge, kEdge);
  double err_left = 0.0, err_right = 0.0;
  double lhs = 0.0;
  if (mid > -kEdge) lhs += GK::integrate(f, -kEdge, mid, 20, 1e-15, &err_left);
  if (mid < kEdge) lhs += GK::integrate(f, mid, kEdge, 20, 1e-15, &err_right);
  const double err = err_left + err_right + 2.0 * normal_cdf(-kEdge);
  if (!std::isfinite(lhs) || err > 1e-12)
    throw NumericFailure("intb quadrature did not converge: x=" + std::to_string(x) +
                         " b=" + std::to_string(b) + " error estimate " + fmt_g(err));
  const double rhs = normal_cdf(x);
  return {lhs, rhs, std::abs(lhs - rhs), err};
}

double m_eps_term(std::int64_t m, std::uint32_t k, double epsilon) {
  return std::exp(log_m_eps_term(m, k, epsilon));
}

MEpsValue m_eps_pmf(std::uint32_t k, double epsilon, std::uint32_t trunc) {
  if (k == 0) throw std::invalid_argument("m_eps_pmf needs k >= 1");
  check_epsilon(epsilon);
  MEpsValue out;
  const auto t = static_cast<std::int64_t>(trunc);
  // Sum from small terms to large ones for accuracy.
  std::vector<double> terms;
  for (std::int64_t m = -t; m <= t; ++m) terms.push_back(m_eps_term(m, k, epsilon));
  std::sort(terms.begin(), terms.end());
  for (double v : terms) out.value += v;

  // m > trunc: e^{-u} <= 1, geometric with ratio 2^{-k}.
  const double upper = std::exp(-(static_cast<double>(t) + 2.0 - epsilon) * k * kLn2 -
                                std::lgamma(k + 1.0)) /
                       (1.0 - std::exp2(-static_cast<double>(k)));
  // m < -trunc: with u = 2^{-m+eps}, the term is e^{-u} (u/2)^k / k!; once
  // u >= 2k + 2 each further step shrinks it by at least half.
  double lower = std::numeric_limits<double>::infinity();
  const double u = std::exp2(epsilon + static_cast<double>(t) + 1.0);
  if (u >= 2.0 * k + 2.0) {
    lower = 2.0 * m_eps_term(-t - 1, k, epsilon);
  } else {
    out.certified = false;
  }
  out.tail_bound = upper + lower;
  return out;
}

double m_eps_total(double epsilon, std::uint32_t trunc, std::uint32_t k_max) {
  double total = 0.0;
  for (std::uint32_t k = k_max; k >= 1; --k) total += m_eps_pmf(k, epsilon, trunc).value;
  return total;
}

double factorial_moment_prediction(const CanonicalFdd& fdd, std::span<const std::uint32_t> exponents,
                                   double epsilon) {
  if (exponents.size() != fdd.size())
    throw std::invalid_argument("need one exponent per FDD entry");
  std::uint64_t total = 0;
  for (auto a : exponents) total += a;
  if (total == 0) throw std::invalid_argument("exponents must sum to at least 1");
  const auto means = poisson_means(fdd, epsilon).poisson_means;
  double out = 1.0;
  for (std::size_t i = 0; i < means.size(); ++i) out *= std::pow(means[i], exponents[i]);
  return out;
}

double p_m0(std::uint64_t m, std::uint32_t k) {
  if (m < k + 2) return 0.0;
  return static_cast<double>(m - k) * static_cast<double>(m - k - 1) /
         (static_cast<double>(m) * static_cast<double>(m - 1));
}

double p_m1(std::uint64_t m, std::uint32_t k) {
  if (m < k + 1) return 0.0;
  return 2.0 * static_cast<double>(m - k) / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double q_m0(std::uint64_t m, std::uint32_t k) {
  return std::pow(1.0 - 2.0 / static_cast<double>(m), k);
}

double q_m1(std::uint64_t m, std::uint32_t k) {
  return 2.0 / static_cast<double>(m) * std::pow(1.0 - 2.0 / static_cast<double>(m), k - 1);
}

Pm01Scan pm01_scan(std::uint32_t k, std::uint64_t m_max) {
  if (k < 1 || k > 4) throw std::invalid_argument("pm01_scan supports 1 <= k <= 4");
  if (m_max > 1'000'000) throw std::invalid_argument("pm01_scan supports m_max <= 1e6");
  Pm01Scan out;
  out.k = k;
  out.m_max = m_max;

  // With q0 = (m-2)^k / m^k and p0 = (m-k)(m-k-1) / (m(m-1)):
  //   (q0 - p0) / q0 = num0 / ((m-2)^k (m-1)),
  //   num0 = (m-2)^k (m-1) - (m-k)(m-k-1) m^{k-1}.
  // With q1 = 2 (m-2)^{k-1} / m^k and p1 = 2(m-k) / (m(m-1)):
  //   (p1 - q1) / q1 = num1 / ((m-1)(m-2)^{k-1}),
  //   num1 = (m-k) m^{k-1} - (m-1)(m-2)^{k-1}.
  struct Row {
    i128 num0, den0, num1, den1;
  };
  auto row = [k](std::uint64_t mm) {
    const i128 m = static_cast<i128>(mm);
    Row r;
    r.den0 = ipow(m - 2, k) * (m - 1);
    r.num0 = r.den0 - (m - k) * (m - k - 1) * ipow(m, k - 1);
    r.den1 = (m - 1) * ipow(m - 2, k - 1);
    r.num1 = (m - k) * ipow(m, k - 1) - r.den1;
    return r;
  };

  bool signs_ok = true;
  for (std::uint64_t m = k + 2; m <= m_max; ++m) {
    const Row r = row(m);
    if (r.num0 <= 0 || r.num1 <= 0) {
      signs_ok = false;
      if (out.first_failure == 0) out.first_failure = m;
      continue;
    }
    const long double md = static_cast<long double>(m);
    const long double lo = md * md * static_cast<long double>(r.num0) / static_cast<long double>(r.den0);
    const long double hi = md * static_cast<long double>(r.num1) / static_cast<long double>(r.den1);
    out.sup_lower = std::max<double>(out.sup_lower, static_cast<double>(lo));
    out.sup_upper = std::max<double>(out.sup_upper, static_cast<double>(hi));
  }

  constexpr i128 kScale = 10'000;
  const auto c_scaled =
      static_cast<i128>(std::floor(std::max(out.sup_lower, out.sup_upper) * 1e4)) + 1;
  out.c = static_cast<double>(c_scaled) / 1e4;

  bool bounds_ok = true;
  for (std::uint64_t m = k + 2; m <= m_max && signs_ok; ++m) {
    const Row r = row(m);
    const i128 mi = static_cast<i128>(m);
    if (!(r.num0 * mi * mi * kScale < c_scaled * r.den0) ||
        !(r.num1 * mi * kScale < c_scaled * r.den1)) {
      bounds_ok = false;
      if (out.first_failure == 0) out.first_failure = m;
      break;
    }
  }
  out.holds = signs_ok && bounds_ok;
  return out;
}

}  // namespace rrtlab
