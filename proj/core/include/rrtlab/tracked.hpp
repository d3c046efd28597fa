#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rrtlab/coalescent.hpp"
#include "rrtlab/random.hpp"

namespace rrtlab {

/// How TrackedCoalescent advances through the chain.
enum class TrackedMode {
  /// Draws every step exactly as draw_chain does. With the same stream the
  /// tracked records are identical to those of run_kingman.
  kStepwise,
  /// Jumps directly to the next step that touches a tracked tree. Same law,
  /// O(k log n) events per chain instead of n steps.
  kSkip,
};

/// Kingman n-coalescent restricted to the vertices 1..k.
///
/// Trees containing a vertex of 1..k always occupy indices 1..c of the forest
/// (c = number of such trees), because their smallest labels are the c
/// smallest of all. The sampler therefore only keeps those c trees and never
/// materializes the rest of the forest.
///
/// Buffers are reused across calls; a single instance is not thread-safe.
class TrackedCoalescent {
 public:
  TrackedCoalescent(std::uint32_t n, std::uint32_t k, TrackedMode mode = TrackedMode::kSkip);

  /// Runs one chain. If `min_degree` is non-empty (size k) the run stops as
  /// soon as some vertex v is known to end with degree < min_degree[v-1] and
  /// returns false; otherwise returns true.
  bool run(Rng& rng, std::span<const std::uint32_t> min_degree = {});

  std::uint32_t n() const { return n_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t degree(Label v) const { return degree_[v - 1]; }
  std::uint32_t depth(Label v) const { return records_[v - 1].depth(); }
  const SelectionRecord& record(Label v) const { return records_[v - 1]; }
  std::span<const SelectionRecord> records() const { return records_; }

  /// P(no tracked tree is chosen at steps i, i-1, ..., j+1) when c tracked
  /// trees are present: (j)_c (j-1)_c / ((i)_c (i-1)_c).
  static double survival(std::uint32_t i, std::uint32_t j, std::uint32_t c);

 private:
  struct Group {
    Label min_label;
    Label root;  // tracked root label, or kNoVertex when the root is untracked
    std::vector<Label> members;
  };

  void reset();
  bool merge_tracked_pair(std::uint32_t step, std::uint32_t a, std::uint32_t b, bool toward_a);
  bool merge_with_untracked(std::uint32_t step, std::uint32_t g, bool toward_g);
  bool demote(std::uint32_t step, Group& group);
  std::uint32_t next_event_step(std::uint32_t i, std::uint32_t c, Rng& rng) const;

  std::uint32_t n_;
  std::uint32_t k_;
  TrackedMode mode_;
  std::span<const std::uint32_t> min_degree_;
  std::vector<Group> groups_;
  std::vector<std::uint32_t> degree_;
  std::vector<SelectionRecord> records_;
};

}  // namespace rrtlab
