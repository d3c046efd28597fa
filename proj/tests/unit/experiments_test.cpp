#include <gtest/gtest.h>

#include <cmath>

#include "rrtlab/experiments.hpp"
#include "rrtlab/oracle.hpp"

using namespace rrtlab;

TEST(Parallel, ResultsIndependentOfWorkers) {
  auto draw = [](std::uint64_t i) {
    Rng rng = Rng::for_stream(42, i);
    return rng();
  };
  const auto one = run_replicates<std::uint64_t>(10000, 1, draw);
  const auto four = run_replicates<std::uint64_t>(10000, 4, draw);
  EXPECT_EQ(one, four);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(0, 100, 3,
                            [](unsigned, std::uint64_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(ConditionalDepth, UnconditionedSmall) {
  ConditionalDepthConfig c;
  c.n = 1u << 12;
  c.k = 2;
  c.a = {0.0, 0.0};
  c.b = {0, 0};
  c.trials = 20000;
  c.seed = 3;
  c.workers = 2;
  const auto r = conditional_depth_experiment(c);
  EXPECT_EQ(r.retained, 20000u);
  EXPECT_EQ(r.acceptance, 1.0);
  ASSERT_EQ(r.correlations.size(), 1u);
  // Once the two vertices share a tree their depths grow together, so the
  // finite-n correlation is positive and of order 1/ln n.
  EXPECT_GT(r.correlations[0], 0.0);
  EXPECT_LT(r.correlations[0], 0.1);
  // Same answer with a different worker count.
  c.workers = 1;
  const auto again = conditional_depth_experiment(c);
  EXPECT_EQ(again.depth, r.depth);
}

TEST(ConditionalDepth, RejectionMatchesExactProbability) {
  // n = 6, condition d(1) >= 2: acceptance against the oracle.
  const std::uint32_t n = 6;
  Rational p(0);
  for (const auto& [key, w] : exact_degree_depth_law(n, 1))
    if (key.degree >= 2) p += w;
  ConditionalDepthConfig c;
  c.n = n;
  c.k = 1;
  c.a = {0.0};
  c.b = {2};
  c.trials = 200000;
  c.seed = 4;
  const auto r = conditional_depth_experiment(c);
  EXPECT_EQ(r.thresholds, std::vector<std::uint32_t>{2});
  const double q = p.to_double();
  EXPECT_NEAR(r.acceptance, q, 5 * std::sqrt(q * (1 - q) / 200000));
  EXPECT_NEAR(r.scaled_acceptance, 4 * r.acceptance, 1e-12);
}

TEST(ConditionalDepth, RunsUntilRetained) {
  ConditionalDepthConfig c;
  c.n = 1u << 10;
  c.a = {1.0};
  c.b = {-3};
  c.min_retained = 500;
  c.batch = 1u << 14;
  c.seed = 5;
  const auto r = conditional_depth_experiment(c);
  EXPECT_GE(r.retained, 500u);
  EXPECT_EQ(r.trials % c.batch, 0u);
  EXPECT_FALSE(r.underpowered);
  for (auto d : r.depth[0]) EXPECT_LE(d, 1024u);
}

TEST(ConditionalDepth, Validation) {
  ConditionalDepthConfig c;
  c.n = 100;
  c.k = 2;
  c.a = {0.0};
  EXPECT_THROW(conditional_depth_experiment(c), std::invalid_argument);
}

TEST(H2, DegenerateCutoff) {
  H2Config c;
  c.n = 20;
  c.replicates = 2000;
  c.seed = 9;
  EXPECT_EQ(h2_negligibility_experiment(c).cutoff, 9u);  // ceil(ln^2 20)
  EXPECT_FALSE(h2_negligibility_experiment(c).degenerate);
  // A cutoff at n keeps the whole chain below it: h2 is the full depth,
  // whose mean is H_n - 1.
  c.cutoff = 20;
  const auto r = h2_negligibility_experiment(c);
  EXPECT_TRUE(r.degenerate);
  double expected = 0.0;
  for (int i = 2; i <= 20; ++i) expected += 1.0 / i;
  EXPECT_NEAR(r.mean_h2, expected, 0.15);
}

TEST(H2, MeanMatchesTruncatedSum) {
  // Unconditioned, E h2 = sum_{i=2}^{cutoff} 1/i: each of those steps adds
  // depth with probability (2/i) * (1/2).
  H2Config c;
  c.n = 1u << 12;
  c.replicates = 40000;
  c.seed = 6;
  const auto r = h2_negligibility_experiment(c);
  double expected = 0.0;
  for (std::uint32_t i = 2; i <= r.cutoff; ++i) expected += 1.0 / i;
  EXPECT_NEAR(r.mean_h2, expected, 0.03);
}

TEST(Tau, TrackedAndFullChainAgree) {
  TauConfig c;
  c.n = 1u << 9;
  c.replicates = 20000;
  c.seed = 7;
  const auto full = tau_experiment(c);
  c.full_chain = false;
  const auto fast = tau_experiment(c);
  EXPECT_NEAR(full.probability, fast.probability,
              4 * std::sqrt(full.stderr_ * full.stderr_ + fast.stderr_ * fast.stderr_) + 1e-3);
  EXPECT_NEAR(full.bound, 8.0 / full.log_squared, 1e-15);
}

TEST(TreePass, SmallRun) {
  TreePassConfig c;
  c.n = 1024;
  c.replicates = 2000;
  c.seed = 8;
  c.fdds = {CanonicalFdd::parse(">=0:R"), CanonicalFdd::parse("0:(-inf,0],0:(0,inf)")};
  const auto r = tree_pass(c);
  ASSERT_EQ(r.replicates.size(), 2000u);
  const auto pmf = r.multiplicity_pmf();
  EXPECT_EQ(pmf[0], 0.0);
  double total = 0;
  for (double p : pmf) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (const auto& rep : r.replicates) {
    EXPECT_GE(rep.argmax_z.size(), 1u);
    EXPECT_GE(rep.max_degree, rep.root_degree);
    EXPECT_EQ(rep.counts.size(), 2u);
  }
  EXPECT_EQ(r.mean_counts(1).size(), 2u);
  EXPECT_EQ(r.argmax_coordinate(0).size(), 2000u);
  EXPECT_LT(multiplicity_tv(pmf, 0.0), 0.2);
}

TEST(TreePass, TrivialSizes) {
  TreePassConfig c;
  c.n = 1;
  c.replicates = 5;
  auto r = tree_pass(c);
  for (const auto& rep : r.replicates) EXPECT_EQ(rep.argmax_z.size(), 1u);
  c.n = 2;
  r = tree_pass(c);
  for (const auto& rep : r.replicates) {
    EXPECT_EQ(rep.argmax_z.size(), 1u);
    EXPECT_EQ(rep.max_degree, 1u);
  }
}
