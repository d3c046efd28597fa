#include "rrtlab/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rrtlab {

RecursiveTree RecursiveTree::from_parents(std::vector<Label> parent) {
  if (parent.size() < 2) throw std::invalid_argument("tree needs at least one vertex");
  const auto n = static_cast<std::uint32_t>(parent.size() - 1);
  parent[0] = kNoVertex;

  Label root = kNoVertex;
  bool increasing = true;
  for (Label v = 1; v <= n; ++v) {
    const Label p = parent[v];
    if (p == kNoVertex) {
      if (root != kNoVertex) throw std::invalid_argument("tree has more than one root");
      root = v;
      continue;
    }
    if (p > n || p == v)
      throw std::invalid_argument("parent of " + std::to_string(v) + " out of range");
    if (p > v) increasing = false;
  }
  if (root == kNoVertex) throw std::invalid_argument("tree has no root");
  if (root != 1) increasing = false;

  // Cycle check: colour each vertex once it is known to reach the root.
  std::vector<std::uint8_t> state(n + 1, 0);  // 0 unseen, 1 on current walk, 2 reaches root
  state[root] = 2;
  std::vector<Label> walk;
  for (Label v = 1; v <= n; ++v) {
    Label u = v;
    walk.clear();
    while (state[u] == 0) {
      state[u] = 1;
      walk.push_back(u);
      u = parent[u];
    }
    if (state[u] == 1) throw std::invalid_argument("parent links contain a cycle");
    for (Label w : walk) state[w] = 2;
  }
  return RecursiveTree(std::move(parent), root, increasing);
}

RecursiveTree grow_rrt(std::uint32_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("grow_rrt: n must be positive");
  std::vector<Label> parent(static_cast<std::size_t>(n) + 1, kNoVertex);
  for (std::uint32_t k = 1; k < n; ++k) parent[k + 1] = static_cast<Label>(rng.below(k)) + 1;
  return RecursiveTree(std::move(parent), 1, true);
}

std::vector<std::uint32_t> degrees(const RecursiveTree& tree) {
  std::vector<std::uint32_t> deg(static_cast<std::size_t>(tree.size()) + 1, 0);
  for (Label v = 1; v <= tree.size(); ++v) {
    if (const Label p = tree.parent(v); p != kNoVertex) ++deg[p];
  }
  return deg;
}

std::vector<std::uint32_t> depths(const RecursiveTree& tree) {
  const std::uint32_t n = tree.size();
  std::vector<std::uint32_t> depth(static_cast<std::size_t>(n) + 1, 0);
  if (tree.is_increasing()) {
    for (Label v = 2; v <= n; ++v) depth[v] = depth[tree.parent(v)] + 1;
    return depth;
  }
  std::vector<bool> known(static_cast<std::size_t>(n) + 1, false);
  known[tree.root()] = true;
  std::vector<Label> walk;
  for (Label v = 1; v <= n; ++v) {
    Label u = v;
    walk.clear();
    while (!known[u]) {
      walk.push_back(u);
      u = tree.parent(u);
    }
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      depth[*it] = depth[tree.parent(*it)] + 1;
      known[*it] = true;
    }
  }
  return depth;
}

std::uint32_t depth_of(const RecursiveTree& tree, Label v) {
  std::uint32_t d = 0;
  for (Label u = v; tree.parent(u) != kNoVertex; u = tree.parent(u)) ++d;
  return d;
}

std::vector<VertexStats> stats(const RecursiveTree& tree) {
  const auto deg = degrees(tree);
  const auto dep = depths(tree);
  std::vector<VertexStats> out;
  out.reserve(tree.size());
  for (Label v = 1; v <= tree.size(); ++v) out.push_back({v, deg[v], dep[v]});
  return out;
}

MaxDegreeSet max_degree_set(std::span<const std::uint32_t> degree_by_label) {
  MaxDegreeSet result{0, {}};
  for (std::size_t v = 1; v < degree_by_label.size(); ++v) {
    const std::uint32_t d = degree_by_label[v];
    if (d > result.degree) {
      result.degree = d;
      result.vertices.clear();
    }
    if (d == result.degree) result.vertices.push_back(static_cast<Label>(v));
  }
  return result;
}

MaxDegreeSet max_degree_set(const RecursiveTree& tree) { return max_degree_set(degrees(tree)); }

std::vector<DegreeDepth> ordered_degree_depth(const RecursiveTree& tree, Rng& rng) {
  const auto deg = degrees(tree);
  const auto dep = depths(tree);
  const std::uint32_t n = tree.size();

  std::vector<Label> order(n);
  std::iota(order.begin(), order.end(), Label{1});
  // Fisher-Yates, then a stable sort: the order within each degree class is a
  // uniform permutation.
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Label a, Label b) { return deg[a] > deg[b]; });

  std::vector<DegreeDepth> out;
  out.reserve(n);
  for (Label v : order) out.push_back({deg[v], dep[v]});
  return out;
}

}  // namespace rrtlab
