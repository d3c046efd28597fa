#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rrtlab/random.hpp"

namespace rrtlab {

/// Vertex label. Labels run 1..n; 0 is reserved for "no vertex".
using Label = std::uint32_t;
inline constexpr Label kNoVertex = 0;

/// Rooted labeled tree on {1..n}, stored as a parent array.
///
/// Conventions used throughout the library:
///   - degree of v is its number of children (not its number of incident edges);
///   - depth of the root is 0.
class RecursiveTree {
 public:
  /// Builds a tree from `parent`, indexed by label (parent[0] is ignored).
  /// Exactly one label must have parent kNoVertex; every other parent must lie
  /// in 1..n and the parent links must be acyclic. Throws std::invalid_argument.
  static RecursiveTree from_parents(std::vector<Label> parent);

  std::uint32_t size() const { return n_; }
  Label root() const { return root_; }
  Label parent(Label v) const { return parent_[v]; }
  std::span<const Label> parents() const { return parent_; }

  /// True when parent(v) < v for every non-root v (so the root is 1).
  bool is_increasing() const { return increasing_; }

  friend bool operator==(const RecursiveTree& a, const RecursiveTree& b) {
    return a.parent_ == b.parent_;
  }

 private:
  RecursiveTree(std::vector<Label> parent, Label root, bool increasing)
      : parent_(std::move(parent)),
        n_(static_cast<std::uint32_t>(parent_.size() - 1)),
        root_(root),
        increasing_(increasing) {}

  friend RecursiveTree grow_rrt(std::uint32_t n, Rng& rng);

  std::vector<Label> parent_;
  std::uint32_t n_;
  Label root_;
  bool increasing_;
};

struct VertexStats {
  Label vertex;
  std::uint32_t degree;
  std::uint32_t depth;
};

struct MaxDegreeSet {
  std::uint32_t degree;
  std::vector<Label> vertices;  // ascending labels
};

struct DegreeDepth {
  std::uint32_t degree;
  std::uint32_t depth;
  friend bool operator==(const DegreeDepth&, const DegreeDepth&) = default;
};

/// Random recursive tree: vertex k+1 attaches to a uniform vertex of {1..k}.
/// Consumes exactly n-1 draws of Rng::below.
RecursiveTree grow_rrt(std::uint32_t n, Rng& rng);

/// Child counts indexed by label (entry 0 unused).
std::vector<std::uint32_t> degrees(const RecursiveTree& tree);

/// Root distances indexed by label (entry 0 unused).
std::vector<std::uint32_t> depths(const RecursiveTree& tree);

/// Depth of a single vertex by walking parent links.
std::uint32_t depth_of(const RecursiveTree& tree, Label v);

/// One record per vertex, in label order.
std::vector<VertexStats> stats(const RecursiveTree& tree);

MaxDegreeSet max_degree_set(const RecursiveTree& tree);
MaxDegreeSet max_degree_set(std::span<const std::uint32_t> degree_by_label);

/// Vertices in decreasing order of degree, ties in uniformly random order.
/// The tie-break permutation is drawn from `rng` (n-1 draws).
std::vector<DegreeDepth> ordered_degree_depth(const RecursiveTree& tree, Rng& rng);

}  // namespace rrtlab
