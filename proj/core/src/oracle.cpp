#include "rrtlab/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rrtlab {
namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational pow_half(std::uint32_t k) { return Rational(1, static_cast<std::int64_t>(1) << k); }

std::uint64_t binom(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// P(Bin(t, 1/2) <= l).
Rational binomial_half_at_most(std::uint32_t t, std::uint32_t l) {
  std::uint64_t s = 0;
  for (std::uint32_t j = 0; j <= std::min(t, l); ++j) s += binom(t, j);
  return Rational(static_cast<std::int64_t>(s), static_cast<std::int64_t>(1) << t);
}

template <class Key>
std::string describe_mismatch(const ExactLaw<Key>& a, const ExactLaw<Key>& b) {
  std::ostringstream out;
  out << "laws differ: sizes " << a.size() << " vs " << b.size();
  return out.str();
}

template <class Key>
bool same_law(const ExactLaw<Key>& a, const ExactLaw<Key>& b) {
  auto strip = [](const ExactLaw<Key>& law) {
    ExactLaw<Key> out;
    for (const auto& [k, p] : law)
      if (p != Rational(0)) out.emplace(k, p);
    return out;
  };
  return strip(a) == strip(b);
}

void check_n(std::uint32_t n, std::uint32_t max_n, const char* what) {
  if (n < 1 || n > max_n)
    throw std::invalid_argument(std::string(what) + " supports 1 <= n <= " + std::to_string(max_n));
}

Rational chain_weight(std::uint32_t n) {
  return Rational(1, static_cast<std::int64_t>(factorial(n) * factorial(n - 1)));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) { *this = make(num, den); }

Rational Rational::make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                        static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                        static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

std::uint64_t factorial(std::uint32_t n) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<RecursiveTree> enumerate_increasing_trees(std::uint32_t n) {
  check_n(n, 8, "enumerate_increasing_trees");
  std::vector<RecursiveTree> out;
  std::vector<Label> parent(static_cast<std::size_t>(n) + 1, kNoVertex);
  std::function<void(Label)> rec = [&](Label v) {
    if (v > n) {
      out.push_back(RecursiveTree::from_parents(parent));
      return;
    }
    for (Label p = 1; p < v; ++p) {
      parent[v] = p;
      rec(v + 1);
    }
  };
  rec(2);
  return out;
}

void for_each_chain(std::uint32_t n, const std::function<void(const CoalescentChain&)>& fn) {
  check_n(n, 6, "for_each_chain");
  std::vector<Merge> merges;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t step) {
    if (step < 2) {
      fn(CoalescentChain(n, merges));
      return;
    }
    for (std::uint32_t b = 2; b <= step; ++b)
      for (std::uint32_t a = 1; a < b; ++a)
        for (bool coin : {true, false}) {
          merges.push_back({a, b, coin});
          rec(step - 1);
          merges.pop_back();
        }
  };
  rec(n);
}

std::vector<CoalescentChain> enumerate_chains(std::uint32_t n) {
  std::vector<CoalescentChain> out;
  for_each_chain(n, [&](const CoalescentChain& c) { out.push_back(c); });
  return out;
}

bool PhiReport::ok() const {
  const std::uint64_t nf = factorial(n);
  return chain_count == factorial(n) * factorial(n - 1) && distinct_chains == chain_count &&
         tree_count == expected_trees && min_fiber == nf && max_fiber == nf && all_increasing &&
         counterexample.empty();
}

PhiReport verify_phi(std::uint32_t n) {
  check_n(n, 5, "verify_phi");
  PhiReport rep;
  rep.n = n;
  rep.expected_trees = factorial(n - 1);
  std::map<std::vector<Label>, std::uint64_t> fibers;
  std::set<std::vector<std::uint32_t>> keys;
  for_each_chain(n, [&](const CoalescentChain& chain) {
    ++rep.chain_count;
    keys.insert(chain.encode());
    const RecursiveTree t = phi(chain);
    if (!t.is_increasing()) {
      rep.all_increasing = false;
      if (rep.counterexample.empty()) {
        std::ostringstream out;
        out << "phi produced a non-increasing tree from chain";
        for (const auto& m : chain.merges()) out << " (" << m.a << ',' << m.b << ',' << m.toward_a << ')';
        rep.counterexample = out.str();
      }
    }
    const auto p = t.parents();
    ++fibers[std::vector<Label>(p.begin(), p.end())];
  });
  rep.distinct_chains = keys.size();
  rep.tree_count = fibers.size();
  rep.min_fiber = std::numeric_limits<std::uint64_t>::max();
  for (const auto& [tree, count] : fibers) {
    rep.min_fiber = std::min(rep.min_fiber, count);
    rep.max_fiber = std::max(rep.max_fiber, count);
  }
  if (fibers.empty()) rep.min_fiber = 0;
  if (rep.counterexample.empty() && rep.min_fiber != rep.max_fiber) {
    for (const auto& [tree, count] : fibers) {
      if (count == factorial(n)) continue;
      std::ostringstream out;
      out << "fiber of size " << count << " over parent array";
      for (std::size_t v = 2; v < tree.size(); ++v) out << ' ' << tree[v];
      rep.counterexample = out.str();
      break;
    }
  }
  return rep;
}

ExactLaw<SelectionKey> exact_selection_law(std::uint32_t n, Label v) {
  check_n(n, 6, "exact_selection_law");
  if (v < 1 || v > n) throw std::invalid_argument("vertex out of range");
  const Rational w = chain_weight(n);
  ExactLaw<SelectionKey> law;
  const Label tracked[] = {v};
  for_each_chain(n, [&](const CoalescentChain& chain) {
    const auto run = replay_chain(chain, tracked);
    const auto deg = degrees(run.final_tree);
    const SelectionKey key{deg[v], depth_of(run.final_tree, v),
                           static_cast<std::uint32_t>(run.records.front().steps.size())};
    law[key] += w;
  });
  return law;
}

ExactLaw<DegreeDepthKey> exact_degree_depth_law(std::uint32_t n, Label v) {
  ExactLaw<DegreeDepthKey> law;
  for (const auto& [key, p] : exact_selection_law(n, v)) law[{key.degree, key.depth}] += p;
  return law;
}

ExactLaw<DegreeDepthKey> uniform_vertex_degree_depth_law(std::uint32_t n) {
  const auto trees = enumerate_increasing_trees(n);
  const Rational w(1, static_cast<std::int64_t>(trees.size() * n));
  ExactLaw<DegreeDepthKey> law;
  for (const auto& t : trees)
    for (const auto& s : stats(t)) law[{s.degree, s.depth}] += w;
  return law;
}

namespace {

std::vector<DegreeDepthKey> multiset_of(const RecursiveTree& t) {
  std::vector<DegreeDepthKey> out;
  for (const auto& s : stats(t)) out.push_back({s.degree, s.depth});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ExactLaw<std::vector<DegreeDepthKey>> chain_multiset_law(std::uint32_t n) {
  check_n(n, 6, "chain_multiset_law");
  const Rational w = chain_weight(n);
  ExactLaw<std::vector<DegreeDepthKey>> law;
  for_each_chain(n, [&](const CoalescentChain& chain) {
    law[multiset_of(replay_chain(chain, {}).final_tree)] += w;
  });
  return law;
}

ExactLaw<std::vector<DegreeDepthKey>> tree_multiset_law(std::uint32_t n) {
  const auto trees = enumerate_increasing_trees(n);
  const Rational w(1, static_cast<std::int64_t>(trees.size()));
  ExactLaw<std::vector<DegreeDepthKey>> law;
  for (const auto& t : trees) law[multiset_of(t)] += w;
  return law;
}

ExactLaw<std::uint32_t> selection_size_law(std::uint32_t n) {
  ExactLaw<std::uint32_t> law{{0u, Rational(1)}};
  for (std::uint32_t i = 2; i <= n; ++i) {
    const Rational p(2, i);
    const Rational q = Rational(1) - p;
    ExactLaw<std::uint32_t> next;
    for (const auto& [s, w] : law) {
      next[s] += w * q;
      next[s + 1] += w * p;
    }
    law = std::move(next);
  }
  return law;
}

ExactLaw<std::uint32_t> geometric_cap_law(const ExactLaw<std::uint32_t>& s_law) {
  ExactLaw<std::uint32_t> law;
  for (const auto& [s, w] : s_law) {
    for (std::uint32_t j = 0; j < s; ++j) law[j] += w * pow_half(j + 1);
    law[s] += w * pow_half(s);
  }
  return law;
}

Rational degree_depth_formula(const ExactLaw<std::uint32_t>& s_law, std::uint32_t k, std::uint32_t l) {
  Rational total(0);
  for (const auto& [s, w] : s_law)
    if (s >= k) total += w * binomial_half_at_most(s - k, l);
  return total * pow_half(k);
}

ExactLaw<std::uint32_t> tree_degree_law(std::uint32_t n, Label i) {
  const auto trees = enumerate_increasing_trees(n);
  if (i < 1 || i > n) throw std::invalid_argument("vertex out of range");
  const Rational w(1, static_cast<std::int64_t>(trees.size()));
  ExactLaw<std::uint32_t> law;
  for (const auto& t : trees) law[degrees(t)[i]] += w;
  return law;
}

ExactLaw<std::uint32_t> bernoulli_degree_law(std::uint32_t n, Label i) {
  ExactLaw<std::uint32_t> law{{0u, Rational(1)}};
  for (std::uint32_t j = i + 1; j <= n; ++j) {
    const Rational p(1, j - 1);
    const Rational q = Rational(1) - p;
    ExactLaw<std::uint32_t> next;
    for (const auto& [s, w] : law) {
      next[s] += w * q;
      next[s + 1] += w * p;
    }
    law = std::move(next);
  }
  return law;
}

IdentityReport check_degree_depth_identity(std::uint32_t n, Label v) {
  IdentityReport rep{"degree-depth", n, 0, true, {}};
  const auto joint = exact_selection_law(n, v);
  ExactLaw<std::uint32_t> s_law;
  ExactLaw<std::uint32_t> d_law;
  for (const auto& [key, p] : joint) {
    s_law[key.selections] += p;
    d_law[key.degree] += p;
  }
  auto fail = [&](const std::string& what) {
    if (rep.ok) rep.counterexample = what;
    rep.ok = false;
  };
  ++rep.checks;
  if (!same_law(s_law, selection_size_law(n))) fail("|S| law differs from the Bernoulli(2/i) sum");
  ++rep.checks;
  if (!same_law(d_law, geometric_cap_law(s_law))) fail("degree law differs from min(G, |S|)");
  for (std::uint32_t k = 0; k <= n; ++k) {
    for (std::uint32_t l = 0; l <= n; ++l) {
      Rational lhs(0);
      for (const auto& [key, p] : joint)
        if (key.degree >= k && key.depth <= l) lhs += p;
      const Rational rhs = degree_depth_formula(s_law, k, l);
      ++rep.checks;
      if (lhs != rhs)
        fail("P(d>=" + std::to_string(k) + ", h<=" + std::to_string(l) + ") = " + lhs.to_string() +
             " but formula gives " + rhs.to_string());
    }
  }
  return rep;
}

IdentityReport check_relabel_identity(std::uint32_t n) {
  IdentityReport rep{"relabel", n, 0, true, {}};
  const auto reference = uniform_vertex_degree_depth_law(n);
  for (Label v = 1; v <= n; ++v) {
    ++rep.checks;
    if (!same_law(exact_degree_depth_law(n, v), reference) && rep.ok) {
      rep.ok = false;
      rep.counterexample = "vertex " + std::to_string(v) + ": " +
                           describe_mismatch(exact_degree_depth_law(n, v), reference);
    }
  }
  ++rep.checks;
  if (!same_law(chain_multiset_law(n), tree_multiset_law(n)) && rep.ok) {
    rep.ok = false;
    rep.counterexample = "multiset laws differ";
  }
  return rep;
}

IdentityReport check_selection_product(std::uint32_t n) {
  check_n(n, 6, "check_selection_product");
  IdentityReport rep{"selection-product", n, 0, true, {}};
  if (n < 2) return rep;
  constexpr std::uint32_t k = 2;
  // Joint law of the two selection sets as bitmasks over steps.
  ExactLaw<std::pair<std::uint32_t, std::uint32_t>> joint;
  const Rational w = chain_weight(n);
  const Label tracked[] = {1, 2};
  for_each_chain(n, [&](const CoalescentChain& chain) {
    const auto run = replay_chain(chain, tracked);
    std::uint32_t m1 = 0, m2 = 0;
    for (auto s : run.records[0].steps) m1 |= 1u << s;
    for (auto s : run.records[1].steps) m2 |= 1u << s;
    joint[{m1, m2}] += w;
  });

  for (std::uint32_t cutoff = 1; cutoff < n; ++cutoff) {
    std::uint32_t above = 0;
    for (std::uint32_t m = cutoff + 1; m <= n; ++m) above |= 1u << m;
    ExactLaw<std::pair<std::uint32_t, std::uint32_t>> restricted;
    for (const auto& [key, p] : joint) restricted[{key.first & above, key.second & above}] += p;

    for (std::uint32_t j1 = 0; j1 <= above; ++j1) {
      if ((j1 & ~above) != 0) continue;
      for (std::uint32_t j2 = 0; j2 <= above; ++j2) {
        if ((j2 & ~above) != 0 || (j1 & j2) != 0) continue;
        Rational product(1);
        for (std::uint32_t m = cutoff + 1; m <= n; ++m) {
          const bool hit = ((j1 | j2) >> m) & 1u;
          const std::int64_t mm = m;
          product *= hit ? Rational(2 * (mm - k), mm * (mm - 1))
                         : Rational((mm - k) * (mm - k - 1), mm * (mm - 1));
        }
        const auto it = restricted.find({j1, j2});
        const Rational observed = it == restricted.end() ? Rational(0) : it->second;
        ++rep.checks;
        if (observed != product && rep.ok) {
          rep.ok = false;
          rep.counterexample = "cutoff " + std::to_string(cutoff) + " J1=" + std::to_string(j1) +
                               " J2=" + std::to_string(j2) + ": " + observed.to_string() + " vs " +
                               product.to_string();
        }
      }
    }
  }
  return rep;
}

IdentityReport check_inclusion_exclusion(std::uint32_t n) {
  check_n(n, 6, "check_inclusion_exclusion");
  IdentityReport rep{"inclusion-exclusion", n, 0, true, {}};
  if (n < 2) return rep;
  ExactLaw<std::pair<std::uint32_t, std::uint32_t>> joint;
  const Rational w = chain_weight(n);
  for_each_chain(n, [&](const CoalescentChain& chain) {
    const auto deg = degrees(replay_chain(chain, {}).final_tree);
    joint[{deg[1], deg[2]}] += w;
  });
  auto at_least = [&](std::uint32_t a, std::uint32_t b) {
    Rational s(0);
    for (const auto& [key, p] : joint)
      if (key.first >= a && key.second >= b) s += p;
    return s;
  };
  for (std::uint32_t m1 = 0; m1 < n; ++m1) {
    for (std::uint32_t m2 = 0; m2 < n; ++m2) {
      const auto it = joint.find({m1, m2});
      const Rational direct = it == joint.end() ? Rational(0) : it->second;
      const Rational alt =
          at_least(m1, m2) - at_least(m1 + 1, m2) - at_least(m1, m2 + 1) + at_least(m1 + 1, m2 + 1);
      ++rep.checks;
      if (direct != alt && rep.ok) {
        rep.ok = false;
        rep.counterexample = "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ")";
      }
    }
  }
  return rep;
}

IdentityReport check_tree_degree_law(std::uint32_t n) {
  IdentityReport rep{"tree-degree", n, 0, true, {}};
  for (Label i = 1; i <= n; ++i) {
    ++rep.checks;
    if (!same_law(tree_degree_law(n, i), bernoulli_degree_law(n, i)) && rep.ok) {
      rep.ok = false;
      rep.counterexample = "vertex " + std::to_string(i);
    }
  }
  return rep;
}

}  // namespace rrtlab
