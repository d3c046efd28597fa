#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rrtlab/coalescent.hpp"
#include "rrtlab/tree.hpp"

namespace rrtlab {

/// Exact fraction with 64-bit numerator and denominator, always reduced with a
/// positive denominator. Intermediates use 128 bits; a result that does not
/// fit in 64 bits throws std::overflow_error.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  static Rational make(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Exact law of a small discrete statistic.
template <class Key>
using ExactLaw = std::map<Key, Rational>;

/// All (n-1)! increasing trees on {1..n}, in lexicographic order of the
/// parent array. Throws std::invalid_argument unless 1 <= n <= 8.
std::vector<RecursiveTree> enumerate_increasing_trees(std::uint32_t n);

/// Calls fn on every oriented chain (pair and coin per step), n!(n-1)! in all.
/// Throws std::invalid_argument unless 1 <= n <= 6.
void for_each_chain(std::uint32_t n, const std::function<void(const CoalescentChain&)>& fn);

std::vector<CoalescentChain> enumerate_chains(std::uint32_t n);

std::uint64_t factorial(std::uint32_t n);

struct PhiReport {
  std::uint32_t n = 0;
  std::uint64_t chain_count = 0;
  std::uint64_t distinct_chains = 0;
  std::uint64_t tree_count = 0;        // increasing trees reached by phi
  std::uint64_t expected_trees = 0;    // (n-1)!
  std::uint64_t min_fiber = 0;
  std::uint64_t max_fiber = 0;
  bool all_increasing = true;
  std::string counterexample;

  bool ok() const;
};

/// Pushes every chain through phi and checks the fiber structure.
/// Throws std::invalid_argument unless 1 <= n <= 5.
PhiReport verify_phi(std::uint32_t n);

struct DegreeDepthKey {
  std::uint32_t degree = 0;
  std::uint32_t depth = 0;
  auto operator<=>(const DegreeDepthKey&) const = default;
};

/// Exact joint law of (degree, depth) of v in the coalescent tree, by
/// enumerating chains. Requires n <= 6.
ExactLaw<DegreeDepthKey> exact_degree_depth_law(std::uint32_t n, Label v);

/// Same pair for a uniformly labelled vertex of a uniform increasing tree.
ExactLaw<DegreeDepthKey> uniform_vertex_degree_depth_law(std::uint32_t n);

/// Law of the sorted multiset of (degree, depth) pairs of all vertices, from
/// chains and from increasing trees.
ExactLaw<std::vector<DegreeDepthKey>> chain_multiset_law(std::uint32_t n);
ExactLaw<std::vector<DegreeDepthKey>> tree_multiset_law(std::uint32_t n);

struct SelectionKey {
  std::uint32_t degree = 0;
  std::uint32_t depth = 0;
  std::uint32_t selections = 0;
  auto operator<=>(const SelectionKey&) const = default;
};

/// Joint law of (degree, depth, |S_n(v)|) from chain enumeration.
ExactLaw<SelectionKey> exact_selection_law(std::uint32_t n, Label v);

/// Law of sum_{i=2}^n Ber(2/i), by convolution.
ExactLaw<std::uint32_t> selection_size_law(std::uint32_t n);

/// Law of min(G, s) when s has law `s_law` and P(G = k) = 2^{-(k+1)}.
ExactLaw<std::uint32_t> geometric_cap_law(const ExactLaw<std::uint32_t>& s_law);

/// 2^{-k} P(Bin(s-k, 1/2) <= l, s >= k) under `s_law`.
Rational degree_depth_formula(const ExactLaw<std::uint32_t>& s_law, std::uint32_t k, std::uint32_t l);

/// Law of the degree of vertex i in a uniform increasing tree, by enumeration.
ExactLaw<std::uint32_t> tree_degree_law(std::uint32_t n, Label i);

/// Law of sum_{j=i+1}^n Ber(1/(j-1)).
ExactLaw<std::uint32_t> bernoulli_degree_law(std::uint32_t n, Label i);

struct IdentityReport {
  std::string name;
  std::uint32_t n = 0;
  std::uint64_t checks = 0;
  bool ok = true;
  std::string counterexample;
};

/// P(d >= k, h <= l) against the formula for every k, l; and the law of d
/// against min(G, |S|).
IdentityReport check_degree_depth_identity(std::uint32_t n, Label v);

/// (degree, depth) of every fixed v against a uniform vertex of a uniform
/// increasing tree, plus the multiset law.
IdentityReport check_relabel_identity(std::uint32_t n);

/// For k = 2 and every cutoff c in [1, n-1]: the probability that the
/// selection sets of vertices 1 and 2 above c equal disjoint (J1, J2)
/// against the product of one-step probabilities.
IdentityReport check_selection_product(std::uint32_t n);

/// P(d(1) = m1, d(2) = m2) against the alternating sum of at-least events.
IdentityReport check_inclusion_exclusion(std::uint32_t n);

/// Degree law of every vertex of a uniform increasing tree against the
/// Bernoulli sum.
IdentityReport check_tree_degree_law(std::uint32_t n);

}  // namespace rrtlab
