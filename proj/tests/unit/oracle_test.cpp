#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rrtlab/oracle.hpp"
#include "rrtlab/records.hpp"

using namespace rrtlab;

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, -2), Rational(-1, 2));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
  EXPECT_EQ(Rational(6, 3).to_string(), "2");
  EXPECT_EQ(Rational(3, 6).to_string(), "1/2");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational(INT64_MAX, 1) + Rational(INT64_MAX, 1), std::overflow_error);
}

TEST(IncreasingTrees, Counts) {
  EXPECT_EQ(enumerate_increasing_trees(1).size(), 1u);
  EXPECT_EQ(enumerate_increasing_trees(2).size(), 1u);
  EXPECT_EQ(enumerate_increasing_trees(4).size(), 6u);
  EXPECT_EQ(enumerate_increasing_trees(7).size(), 720u);
  const auto eight = enumerate_increasing_trees(8);
  EXPECT_EQ(eight.size(), 5040u);
  std::set<std::vector<Label>> distinct;
  for (const auto& t : eight) {
    EXPECT_TRUE(t.is_increasing());
    distinct.insert({t.parents().begin(), t.parents().end()});
  }
  EXPECT_EQ(distinct.size(), 5040u);
  EXPECT_THROW(enumerate_increasing_trees(9), std::invalid_argument);
  EXPECT_THROW(enumerate_increasing_trees(0), std::invalid_argument);
}

TEST(Chains, Counts) {
  EXPECT_EQ(enumerate_chains(2).size(), 2u);
  EXPECT_EQ(enumerate_chains(3).size(), 12u);
  EXPECT_EQ(enumerate_chains(4).size(), 144u);
  std::uint64_t six = 0;
  for_each_chain(6, [&](const CoalescentChain&) { ++six; });
  EXPECT_EQ(six, 86400u);
  EXPECT_THROW(enumerate_chains(7), std::invalid_argument);
}

TEST(Phi, Fibers) {
  const std::uint64_t trees[] = {1, 1, 1, 2, 6, 24};
  for (std::uint32_t n = 1; n <= 5; ++n) {
    const auto r = verify_phi(n);
    EXPECT_TRUE(r.ok()) << "n=" << n << ": " << r.counterexample;
    EXPECT_EQ(r.chain_count, factorial(n) * factorial(n - 1));
    EXPECT_EQ(r.distinct_chains, r.chain_count);
    EXPECT_EQ(r.tree_count, trees[n]);
    EXPECT_EQ(r.min_fiber, factorial(n));
    EXPECT_EQ(r.max_fiber, factorial(n));
    EXPECT_EQ(r.tree_count * r.min_fiber, r.chain_count);
  }
  const auto four = verify_phi(4);
  EXPECT_EQ(four.chain_count, 144u);
  EXPECT_EQ(four.min_fiber, 24u);
  const auto five = verify_phi(5);
  EXPECT_EQ(five.chain_count, 2880u);
  EXPECT_EQ(five.min_fiber, 120u);
  EXPECT_THROW(verify_phi(6), std::invalid_argument);
}

TEST(ExactLaw, TwoVertices) {
  const auto law = exact_degree_depth_law(2, 1);
  ASSERT_EQ(law.size(), 2u);
  EXPECT_EQ(law.at({1, 0}), Rational(1, 2));
  EXPECT_EQ(law.at({0, 1}), Rational(1, 2));
  const auto cap = geometric_cap_law(selection_size_law(2));
  EXPECT_EQ(cap.at(0), Rational(1, 2));
  EXPECT_EQ(cap.at(1), Rational(1, 2));
}

TEST(ExactLaw, ThreeVerticesSelectionSize) {
  const auto law = selection_size_law(3);
  EXPECT_EQ(law.at(1), Rational(1, 3));
  EXPECT_EQ(law.at(2), Rational(2, 3));
  Rational p(0);
  for (const auto& [key, w] : exact_selection_law(3, 3))
    if (key.selections == 2) p += w;
  EXPECT_EQ(p, Rational(2, 3));
}

TEST(Identities, DegreeDepth) {
  for (std::uint32_t n = 2; n <= 6; ++n) {
    for (Label v : {1u, n}) {
      const auto r = check_degree_depth_identity(n, v);
      EXPECT_TRUE(r.ok) << "n=" << n << " v=" << v << ": " << r.counterexample;
      EXPECT_GT(r.checks, 2u);
    }
  }
}

TEST(Identities, Relabel) {
  for (std::uint32_t n = 2; n <= 6; ++n) {
    const auto r = check_relabel_identity(n);
    EXPECT_TRUE(r.ok) << "n=" << n << ": " << r.counterexample;
  }
}

TEST(Identities, SelectionProduct) {
  for (std::uint32_t n = 2; n <= 6; ++n) {
    const auto r = check_selection_product(n);
    EXPECT_TRUE(r.ok) << "n=" << n << ": " << r.counterexample;
  }
}

TEST(Identities, InclusionExclusion) {
  for (std::uint32_t n = 2; n <= 6; ++n) EXPECT_TRUE(check_inclusion_exclusion(n).ok);
}

// Degree of vertex i in a uniform increasing tree is a sum of independent
// Ber(1/(j-1)), j = i+1..n: vertex j picks i among its j-1 predecessors.
TEST(Identities, TreeDegreeLaw) {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    const auto r = check_tree_degree_law(n);
    EXPECT_TRUE(r.ok) << "n=" << n << ": " << r.counterexample;
  }
  // The mean of d(1) is therefore H_{n-1}.
  Rational mean(0);
  for (const auto& [d, p] : tree_degree_law(7, 1)) mean += Rational(d) * p;
  EXPECT_EQ(mean, Rational(1) + Rational(1, 2) + Rational(1, 3) + Rational(1, 4) + Rational(1, 5) +
                      Rational(1, 6));
  // Ber(1/j) summands would give a different law already at n = 3.
  EXPECT_NE(tree_degree_law(3, 1).at(2), Rational(1, 6));
}

TEST(Golden, MatchesCommittedFile) {
  std::ifstream in(std::string(RRTLAB_GOLDEN_DIR) + "/oracle_laws.json");
  ASSERT_TRUE(in) << "missing golden file";
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(buf.str()), nlohmann::json::parse(golden_document(6)));
}

TEST(Golden, ExactValuesAtFour) {
  const auto doc = nlohmann::json::parse(golden_document(4));
  const auto& four = doc["laws"][3];
  EXPECT_EQ(four["chains"], 144);
  EXPECT_EQ(four["increasing_trees"], 6);
  EXPECT_EQ(four["fiber_min"], 24);
  // P(|S_4| = 3) = (2/3)(2/4) = 1/3.
  bool found = false;
  for (const auto& row : four["selection_size"])
    if (row["size"] == 3) {
      EXPECT_EQ(row["p"], "1/3");
      found = true;
    }
  EXPECT_TRUE(found);
}
