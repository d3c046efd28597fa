#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "rrtlab/oracle.hpp"
#include "rrtlab/tree.hpp"

using namespace rrtlab;

namespace {

RecursiveTree make(std::vector<Label> parent) { return RecursiveTree::from_parents(std::move(parent)); }

RecursiveTree star(std::uint32_t n) {
  std::vector<Label> p(n + 1, 1);
  p[0] = p[1] = kNoVertex;
  return make(p);
}

}  // namespace

TEST(GrowRrt, RejectsZero) {
  Rng rng(1);
  EXPECT_THROW(grow_rrt(0, rng), std::invalid_argument);
}

TEST(GrowRrt, SingleVertex) {
  Rng rng(1);
  const auto t = grow_rrt(1, rng);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(degrees(t)[1], 0u);
  EXPECT_EQ(depths(t)[1], 0u);
}

TEST(GrowRrt, TwoVerticesForced) {
  Rng rng(9);
  const auto t = grow_rrt(2, rng);
  EXPECT_EQ(t.parent(2), 1u);
  EXPECT_EQ(degrees(t)[1], 1u);
  EXPECT_EQ(depths(t)[2], 1u);
}

TEST(GrowRrt, ThreeVerticesHalfHalf) {
  Rng rng(3);
  int to_root = 0;
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) to_root += grow_rrt(3, rng).parent(3) == 1;
  EXPECT_NEAR(static_cast<double>(to_root) / reps, 0.5, 4 * 0.5 / std::sqrt(reps));
}

TEST(GrowRrt, ReproducibleForSeed) {
  Rng a(77), b(77);
  EXPECT_EQ(grow_rrt(5000, a), grow_rrt(5000, b));
}

TEST(GrowRrt, AlwaysIncreasing) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(grow_rrt(50, rng).is_increasing());
}

// Frequencies over the (n-1)! increasing trees listed by the oracle.
TEST(GrowRrt, UniformOverIncreasingTrees) {
  for (std::uint32_t n : {4u, 5u, 7u}) {
    const auto trees = enumerate_increasing_trees(n);
    std::map<std::vector<Label>, int> seen;
    for (const auto& t : trees) seen[{t.parents().begin(), t.parents().end()}] = 0;
    Rng rng(100 + n);
    const int reps = 300 * static_cast<int>(trees.size());
    for (int i = 0; i < reps; ++i) {
      const auto t = grow_rrt(n, rng);
      auto it = seen.find({t.parents().begin(), t.parents().end()});
      ASSERT_NE(it, seen.end());
      ++it->second;
    }
    const double expected = static_cast<double>(reps) / trees.size();
    double chi2 = 0.0;
    for (const auto& [tree, count] : seen) {
      EXPECT_GT(count, 0);
      chi2 += (count - expected) * (count - expected) / expected;
    }
    // df = (n-1)! - 1; mean df, sd sqrt(2 df). Six standard deviations.
    const double df = static_cast<double>(trees.size() - 1);
    EXPECT_LT(chi2, df + 6 * std::sqrt(2 * df)) << "n=" << n;
  }
}

TEST(FromParents, Validation) {
  EXPECT_THROW(make({0, 0, 0}), std::invalid_argument);       // two roots
  EXPECT_THROW(make({0, 2, 1}), std::invalid_argument);       // no root
  EXPECT_THROW(make({0, 0, 5}), std::invalid_argument);       // out of range
  EXPECT_THROW(make({0, 0, 3, 4, 3}), std::invalid_argument); // cycle 3-4
  EXPECT_THROW(make({0, 0, 2}), std::invalid_argument);       // self parent
  const auto t = make({0, 2, 0, 2});
  EXPECT_EQ(t.root(), 2u);
  EXPECT_FALSE(t.is_increasing());
}

TEST(Stats, Path) {
  const auto s = stats(make({0, 0, 1, 2}));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].degree, 1u);
  EXPECT_EQ(s[1].degree, 1u);
  EXPECT_EQ(s[2].degree, 0u);
  EXPECT_EQ(s[0].depth, 0u);
  EXPECT_EQ(s[1].depth, 1u);
  EXPECT_EQ(s[2].depth, 2u);
}

TEST(Stats, Star) {
  const auto s = stats(star(6));
  EXPECT_EQ(s[0].degree, 5u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_EQ(s[i].depth, 1u);
}

TEST(Stats, HandWalkedFourVertices) {
  const auto s = stats(make({0, 0, 1, 1, 3}));
  const std::uint32_t deg[] = {2, 0, 1, 0};
  const std::uint32_t dep[] = {0, 1, 1, 2};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(s[i].degree, deg[i]);
    EXPECT_EQ(s[i].depth, dep[i]);
  }
}

TEST(Stats, NonIncreasingTree) {
  // 3 is the root: 3 <- 1 <- 2, 3 <- 4.
  const auto t = make({0, 3, 1, 0, 3});
  const auto d = depths(t);
  EXPECT_EQ(d[3], 0u);
  EXPECT_EQ(d[1], 1u);
  EXPECT_EQ(d[2], 2u);
  EXPECT_EQ(d[4], 1u);
  EXPECT_EQ(depth_of(t, 2), 2u);
}

TEST(Stats, InvariantsOnRandomTrees) {
  Rng rng(11);
  for (int r = 0; r < 20; ++r) {
    const auto t = grow_rrt(1000, rng);
    std::uint64_t deg_sum = 0, roots = 0;
    for (const auto& s : stats(t)) {
      deg_sum += s.degree;
      roots += s.depth == 0;
      EXPECT_EQ(s.depth, depth_of(t, s.vertex));
    }
    EXPECT_EQ(deg_sum, 999u);
    EXPECT_EQ(roots, 1u);
  }
}

TEST(MaxDegreeSet, Examples) {
  auto one = max_degree_set(make({0, 0}));
  EXPECT_EQ(one.degree, 0u);
  EXPECT_EQ(one.vertices, std::vector<Label>{1});
  auto s = max_degree_set(star(4));
  EXPECT_EQ(s.degree, 3u);
  EXPECT_EQ(s.vertices, std::vector<Label>{1});
  auto p = max_degree_set(make({0, 0, 1, 2}));
  EXPECT_EQ(p.degree, 1u);
  EXPECT_EQ(p.vertices, (std::vector<Label>{1, 2}));
}

TEST(OrderedDegreeDepth, Star) {
  Rng rng(2);
  const auto o = ordered_degree_depth(star(4), rng);
  ASSERT_EQ(o.size(), 4u);
  EXPECT_EQ(o[0], (DegreeDepth{3, 0}));
  for (int i = 1; i < 4; ++i) EXPECT_EQ(o[i], (DegreeDepth{0, 1}));
}

TEST(OrderedDegreeDepth, SingleVertex) {
  Rng rng(2);
  const auto o = ordered_degree_depth(make({0, 0}), rng);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0], (DegreeDepth{0, 0}));
}

TEST(OrderedDegreeDepth, PathTiesAreFair) {
  const auto path = make({0, 0, 1, 2});
  Rng rng(4);
  int root_first = 0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    const auto o = ordered_degree_depth(path, rng);
    ASSERT_EQ(o[0].degree, 1u);
    ASSERT_EQ(o[1].degree, 1u);
    ASSERT_EQ(o[2], (DegreeDepth{0, 2}));
    root_first += o[0].depth == 0;
  }
  EXPECT_NEAR(static_cast<double>(root_first) / reps, 0.5, 4 * 0.5 / std::sqrt(reps));
}

TEST(OrderedDegreeDepth, SortedDescending) {
  Rng rng(8);
  const auto t = grow_rrt(3000, rng);
  const auto o = ordered_degree_depth(t, rng);
  for (std::size_t i = 1; i < o.size(); ++i) EXPECT_GE(o[i - 1].degree, o[i].degree);
}
