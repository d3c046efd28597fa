#include "rrtlab/coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rrtlab {
namespace {

// Fenwick tree over labels holding 1 at every label that is currently the
// smallest label of its component; select(k) finds the k-th such label.
class MinLabelIndex {
 public:
  explicit MinLabelIndex(std::uint32_t n) : n_(n), tree_(static_cast<std::size_t>(n) + 1, 0) {
    for (std::uint32_t i = 1; i <= n; ++i) {
      tree_[i] += 1;
      if (const std::uint32_t j = i + (i & (~i + 1)); j <= n) tree_[j] += tree_[i];
    }
    top_ = 1;
    while (top_ * 2 <= n_) top_ *= 2;
  }

  void erase(std::uint32_t label) {
    for (std::uint32_t i = label; i <= n_; i += i & (~i + 1)) --tree_[i];
  }

  std::uint32_t select(std::uint32_t k) const {
    std::uint32_t pos = 0;
    for (std::uint32_t step = top_; step != 0; step >>= 1) {
      if (pos + step <= n_ && tree_[pos + step] < k) {
        pos += step;
        k -= tree_[pos];
      }
    }
    return pos + 1;
  }

 private:
  std::uint32_t n_;
  std::uint32_t top_ = 1;
  std::vector<std::uint32_t> tree_;
};

class Components {
 public:
  explicit Components(std::uint32_t n)
      : link_(static_cast<std::size_t>(n) + 1),
        size_(static_cast<std::size_t>(n) + 1, 1),
        root_(static_cast<std::size_t>(n) + 1) {
    for (std::uint32_t v = 0; v <= n; ++v) link_[v] = root_[v] = v;
  }

  std::uint32_t find(std::uint32_t v) {
    while (link_[v] != v) {
      link_[v] = link_[link_[v]];
      v = link_[v];
    }
    return v;
  }

  Label root_of(std::uint32_t rep) const { return root_[rep]; }

  // Joins two representatives and records the surviving tree root.
  void join(std::uint32_t x, std::uint32_t y, Label new_root) {
    if (size_[x] < size_[y]) std::swap(x, y);
    link_[y] = x;
    size_[x] += size_[y];
    root_[x] = new_root;
  }

 private:
  std::vector<std::uint32_t> link_;
  std::vector<std::uint32_t> size_;
  std::vector<Label> root_;
};

}  // namespace

CoalescentChain::CoalescentChain(std::uint32_t n, std::vector<Merge> merges) : n_(n) {
  if (n == 0) throw std::invalid_argument("chain needs n >= 1");
  merges_.reserve(n - 1);
  for (const Merge& m : merges) push(m);
}

void CoalescentChain::push(Merge m) {
  if (merges_.size() + 1 >= n_) throw InvalidState("chain already complete");
  const auto step = static_cast<std::uint32_t>(n_ - merges_.size());
  if (m.a < 1 || m.a >= m.b || m.b > step)
    throw std::invalid_argument("merge pair out of range at step " + std::to_string(step));
  merges_.push_back(m);
}

std::vector<std::uint32_t> CoalescentChain::encode() const {
  std::vector<std::uint32_t> key;
  key.reserve(merges_.size());
  for (const Merge& m : merges_) {
    const std::uint32_t ordinal = (m.b - 1) * (m.b - 2) / 2 + (m.a - 1);
    key.push_back(ordinal * 2 + (m.toward_a ? 1u : 0u));
  }
  return key;
}

std::uint32_t SelectionRecord::degree() const {
  std::uint32_t d = 0;
  auto kappa = kappa_steps.begin();
  for (std::uint32_t step : steps) {
    if (kappa != kappa_steps.end() && *kappa == step) break;
    ++d;
  }
  return d;
}

const SelectionRecord& KingmanRun::record(Label v) const {
  for (const auto& r : records)
    if (r.vertex == v) return r;
  throw std::invalid_argument("vertex " + std::to_string(v) + " was not tracked");
}

CoalescentChain draw_chain(std::uint32_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("draw_chain: n must be positive");
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::uint32_t i = n; i >= 2; --i) {
    auto x = static_cast<std::uint32_t>(rng.below(i)) + 1;
    auto y = static_cast<std::uint32_t>(rng.below(i - 1)) + 1;
    if (y >= x) ++y;
    const bool toward_a = rng.coin();
    merges.push_back({std::min(x, y), std::max(x, y), toward_a});
  }
  return CoalescentChain(n, std::move(merges));
}

KingmanRun replay_chain(const CoalescentChain& chain, std::span<const Label> tracked) {
  const std::uint32_t n = chain.size();
  if (!chain.complete()) throw InvalidState("replay needs a complete chain");
  for (Label v : tracked)
    if (v < 1 || v > n) throw std::invalid_argument("tracked label out of range");

  std::vector<Label> parent(static_cast<std::size_t>(n) + 1, kNoVertex);
  std::vector<Label> sigma(static_cast<std::size_t>(n) + 1, 0);
  MinLabelIndex mins(n);
  Components comps(n);

  std::vector<SelectionRecord> records;
  records.reserve(tracked.size());
  for (Label v : tracked) records.push_back({v, n, {}, {}});

  for (std::uint32_t i = n; i >= 2; --i) {
    const Merge& m = chain.at_step(i);
    const std::uint32_t min_a = mins.select(m.a);
    const std::uint32_t min_b = mins.select(m.b);
    const std::uint32_t rep_a = comps.find(min_a);
    const std::uint32_t rep_b = comps.find(min_b);
    const Label root_a = comps.root_of(rep_a);
    const Label root_b = comps.root_of(rep_b);
    const Label new_root = m.toward_a ? root_a : root_b;
    const Label demoted = m.toward_a ? root_b : root_a;
    const std::uint32_t demoted_rep = m.toward_a ? rep_b : rep_a;

    for (auto& r : records) {
      const std::uint32_t rep = comps.find(r.vertex);
      if (rep != rep_a && rep != rep_b) continue;
      r.steps.push_back(i);
      if (rep == demoted_rep) r.kappa_steps.push_back(i);
    }

    parent[demoted] = new_root;
    sigma[demoted] = i;
    comps.join(rep_a, rep_b, new_root);
    mins.erase(min_b);
  }
  const Label root = comps.root_of(comps.find(1));
  sigma[root] = 1;

  return KingmanRun{chain, RecursiveTree::from_parents(std::move(parent)), std::move(sigma),
                    std::move(records)};
}

KingmanRun run_kingman(std::uint32_t n, Rng& rng, std::span<const Label> tracked) {
  if (n == 0) throw std::invalid_argument("run_kingman: n must be positive");
  for (Label v : tracked)
    if (v < 1 || v > n) throw std::invalid_argument("tracked label out of range");
  return replay_chain(draw_chain(n, rng), tracked);
}

std::vector<Label> sigma_relabel(const CoalescentChain& chain) {
  if (!chain.complete()) throw InvalidState("sigma_relabel needs a complete chain");
  return replay_chain(chain, {}).sigma;
}

RecursiveTree phi(const CoalescentChain& chain) {
  const KingmanRun run = replay_chain(chain, {});
  const std::uint32_t n = chain.size();
  std::vector<Label> parent(static_cast<std::size_t>(n) + 1, kNoVertex);
  for (Label v = 1; v <= n; ++v) {
    if (const Label p = run.final_tree.parent(v); p != kNoVertex) parent[run.sigma[v]] = run.sigma[p];
  }
  return RecursiveTree::from_parents(std::move(parent));
}

std::uint32_t log_squared_cutoff(std::uint32_t n) {
  if (n <= 1) return 0;
  const double l = std::log(static_cast<double>(n));
  return static_cast<std::uint32_t>(std::ceil(l * l));
}

TruncatedSelection partial_depths(const SelectionRecord& record, std::uint32_t cutoff) {
  TruncatedSelection out;
  out.vertex = record.vertex;
  out.cutoff = cutoff;
  out.degenerate = cutoff >= record.n;
  for (std::uint32_t step : record.steps)
    if (step > cutoff) out.upper.push_back(step);
  for (std::uint32_t step : record.kappa_steps) {
    if (step > cutoff)
      ++out.h1;
    else
      ++out.h2;
  }
  return out;
}

std::uint32_t tau_k(std::span<const SelectionRecord> records, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("tau_k needs k >= 2");
  if (records.empty() || k > records.front().n) throw std::invalid_argument("tau_k: k exceeds n");

  std::vector<const SelectionRecord*> byLabel(k + 1, nullptr);
  for (const auto& r : records)
    if (r.vertex >= 1 && r.vertex <= k) byLabel[r.vertex] = &r;
  for (Label v = 1; v <= k; ++v)
    if (byLabel[v] == nullptr) throw std::invalid_argument("tau_k: vertex not tracked");

  // Steps are descending, so the first step shared by any pair is a candidate;
  // the answer is the largest such step over all pairs.
  std::uint32_t tau = 1;
  for (Label v = 1; v <= k; ++v) {
    for (Label w = v + 1; w <= k; ++w) {
      const auto& sv = byLabel[v]->steps;
      const auto& sw = byLabel[w]->steps;
      auto i = sv.begin();
      auto j = sw.begin();
      while (i != sv.end() && j != sw.end()) {
        if (*i == *j) {
          tau = std::max(tau, *i);
          break;
        }
        if (*i > *j)
          ++i;
        else
          ++j;
      }
    }
  }
  return tau;
}

double expected_selection_size(std::uint32_t n) {
  double s = 0.0;
  for (std::uint32_t i = n; i >= 2; --i) s += 2.0 / i;
  return s;
}

EmpiricalPmf selection_set_law_check(std::uint32_t n, Label v, std::uint64_t replicates,
                                     Rng& rng) {
  if (replicates == 0) throw std::invalid_argument("replicates must be positive");
  const Label tracked[] = {v};
  EmpiricalPmf out;
  std::vector<std::uint64_t> counts;
  double total = 0.0;
  for (std::uint64_t r = 0; r < replicates; ++r) {
    const auto run = run_kingman(n, rng, tracked);
    const auto size = run.records.front().steps.size();
    if (counts.size() <= size) counts.resize(size + 1, 0);
    ++counts[size];
    total += static_cast<double>(size);
  }
  out.samples = replicates;
  out.mean = total / static_cast<double>(replicates);
  for (auto c : counts) out.pmf.push_back(static_cast<double>(c) / static_cast<double>(replicates));
  return out;
}

}  // namespace rrtlab
