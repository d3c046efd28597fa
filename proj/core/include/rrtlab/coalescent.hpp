#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rrtlab/random.hpp"
#include "rrtlab/tree.hpp"

namespace rrtlab {

/// Thrown when an operation needs a complete merge log.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One step of the discrete Kingman chain. At step i there are i trees,
/// indexed 1..i in increasing order of their smallest label; trees a < b are
/// merged by an edge between their roots. `toward_a` is the coin: when set the
/// root of tree b becomes a child of the root of tree a, otherwise the reverse.
struct Merge {
  std::uint32_t a;
  std::uint32_t b;
  bool toward_a;
  friend bool operator==(const Merge&, const Merge&) = default;
};

/// Merge log of an n-coalescent: merges[n - i] is the merge performed at step
/// i, for i = n down to 2.
class CoalescentChain {
 public:
  CoalescentChain() = default;
  explicit CoalescentChain(std::uint32_t n, std::vector<Merge> merges = {});

  std::uint32_t size() const { return n_; }
  std::span<const Merge> merges() const { return merges_; }
  bool complete() const { return merges_.size() + 1 == n_; }

  /// Merge at step i, 2 <= i <= n.
  const Merge& at_step(std::uint32_t i) const { return merges_[n_ - i]; }

  /// Appends the merge for the next step; validates 1 <= a < b <= step.
  void push(Merge m);

  /// Packs the chain into one integer per step: ordinal of the pair among the
  /// i(i-1)/2 pairs, times two, plus the coin. Used for deduplication.
  std::vector<std::uint32_t> encode() const;

 private:
  std::uint32_t n_ = 0;
  std::vector<Merge> merges_;
};

/// Steps at which the tree containing `vertex` was chosen to merge, and the
/// subset of those where the new edge pointed away from that tree's root.
/// Both lists are in chain order, i.e. descending step index.
struct SelectionRecord {
  Label vertex = kNoVertex;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> steps;
  std::vector<std::uint32_t> kappa_steps;

  /// Depth in the final tree: every kappa step pushes the vertex one level down.
  std::uint32_t depth() const { return static_cast<std::uint32_t>(kappa_steps.size()); }

  /// Children acquired while still a root: selection steps before the first
  /// kappa step.
  std::uint32_t degree() const;
};

struct TruncatedSelection {
  Label vertex = kNoVertex;
  std::uint32_t cutoff = 0;
  std::vector<std::uint32_t> upper;  // selection steps with index > cutoff
  std::uint32_t h1 = 0;              // depth in the forest with `cutoff` trees
  std::uint32_t h2 = 0;              // remaining depth gained after that forest
  bool degenerate = false;           // cutoff >= n: nothing above the cutoff
};

struct KingmanRun {
  CoalescentChain chain;
  RecursiveTree final_tree;           // original labels
  std::vector<Label> sigma;           // edge-order relabeling, indexed by label
  std::vector<SelectionRecord> records;  // one per tracked label, in request order

  const SelectionRecord& record(Label v) const;
};

/// Draws a chain: per step a uniform pair among i(i-1)/2 and a fair coin.
/// Per step consumes below(i), below(i-1) and one coin, in that order.
CoalescentChain draw_chain(std::uint32_t n, Rng& rng);

/// Replays a complete chain, building the final tree, sigma and the selection
/// records of `tracked`.
KingmanRun replay_chain(const CoalescentChain& chain, std::span<const Label> tracked);

/// draw_chain followed by replay_chain. Throws std::invalid_argument for
/// n == 0 or a tracked label outside 1..n.
KingmanRun run_kingman(std::uint32_t n, Rng& rng, std::span<const Label> tracked = {});

/// sigma(root) = 1 and sigma(v) = i when v stopped being a root at step i.
/// Throws InvalidState for an incomplete chain.
std::vector<Label> sigma_relabel(const CoalescentChain& chain);

/// Final tree relabeled by sigma; always increasing with root 1.
RecursiveTree phi(const CoalescentChain& chain);

/// ceil(ln(n)^2), the number of trees at which the chain is cut.
std::uint32_t log_squared_cutoff(std::uint32_t n);

/// Splits a selection record at `cutoff`.
TruncatedSelection partial_depths(const SelectionRecord& record, std::uint32_t cutoff);

/// Largest step at which two distinct vertices of {1..k} are selected together,
/// or 1 if that never happens. `records` must contain vertices 1..k.
std::uint32_t tau_k(std::span<const SelectionRecord> records, std::uint32_t k);

struct EmpiricalPmf {
  std::vector<double> pmf;
  double mean = 0.0;
  std::uint64_t samples = 0;
};

/// Empirical law of |S_n(v)| from `replicates` full chains.
EmpiricalPmf selection_set_law_check(std::uint32_t n, Label v, std::uint64_t replicates,
                                     Rng& rng);

/// E|S_n(v)| = sum_{i=2}^n 2/i.
double expected_selection_size(std::uint32_t n);

}  // namespace rrtlab
