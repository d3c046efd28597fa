#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "rrtlab/coalescent.hpp"
#include "rrtlab/oracle.hpp"
#include "rrtlab/tracked.hpp"

using namespace rrtlab;

TEST(Tracked, RejectsBadSizes) {
  EXPECT_THROW(TrackedCoalescent(0, 1), std::invalid_argument);
  EXPECT_THROW(TrackedCoalescent(5, 0), std::invalid_argument);
  EXPECT_THROW(TrackedCoalescent(5, 6), std::invalid_argument);
}

TEST(Tracked, SurvivalProducts) {
  // One tracked tree: P(untouched from 10 trees down to 5) = (5*4)/(10*9).
  EXPECT_DOUBLE_EQ(TrackedCoalescent::survival(10, 5, 1), 20.0 / 90.0);
  // Two tracked trees: (5*4)(4*3) / ((10*9)(9*8)).
  EXPECT_DOUBLE_EQ(TrackedCoalescent::survival(10, 5, 2), 20.0 * 12.0 / (90.0 * 72.0));
  EXPECT_DOUBLE_EQ(TrackedCoalescent::survival(10, 10, 3), 1.0);
  EXPECT_EQ(TrackedCoalescent::survival(10, 1, 1), 0.0);
}

// With the same stream, the stepwise sampler consumes random numbers exactly
// like draw_chain, so its records coincide with run_kingman's.
TEST(Tracked, StepwiseMatchesFullChain) {
  for (std::uint32_t k : {1u, 2u, 4u}) {
    TrackedCoalescent tc(300, k, TrackedMode::kStepwise);
    std::vector<Label> tracked(k);
    for (Label v = 1; v <= k; ++v) tracked[v - 1] = v;
    for (int r = 0; r < 50; ++r) {
      Rng a = Rng::for_stream(1, r), b = Rng::for_stream(1, r);
      ASSERT_TRUE(tc.run(a));
      const auto run = run_kingman(300, b, tracked);
      const auto deg = degrees(run.final_tree);
      for (Label v = 1; v <= k; ++v) {
        EXPECT_EQ(tc.record(v).steps, run.record(v).steps);
        EXPECT_EQ(tc.record(v).kappa_steps, run.record(v).kappa_steps);
        EXPECT_EQ(tc.degree(v), deg[v]);
        EXPECT_EQ(tc.depth(v), depth_of(run.final_tree, v));
      }
    }
  }
}

// Skip mode against the exact law from enumerating every chain at n = 6.
TEST(Tracked, SkipModeMatchesExactLaw) {
  const std::uint32_t n = 6;
  const auto exact = exact_selection_law(n, 1);
  TrackedCoalescent tc(n, 1, TrackedMode::kSkip);
  std::map<SelectionKey, double> counts;
  const int reps = 400000;
  for (int r = 0; r < reps; ++r) {
    Rng rng = Rng::for_stream(2, r);
    tc.run(rng);
    const SelectionKey key{tc.degree(1), tc.depth(1),
                           static_cast<std::uint32_t>(tc.record(1).steps.size())};
    counts[key] += 1.0;
  }
  double chi2 = 0.0;
  for (const auto& [key, p] : exact) {
    const double e = p.to_double() * reps;
    chi2 += (counts[key] - e) * (counts[key] - e) / e;
    counts.erase(key);
  }
  EXPECT_TRUE(counts.empty()) << "skip sampler produced a configuration of probability 0";
  const double df = static_cast<double>(exact.size() - 1);
  EXPECT_LT(chi2, df + 6 * std::sqrt(2 * df));
}

// Skip mode with three tracked vertices against the full chain, at a size
// where enumeration is impossible: compare summary means.
TEST(Tracked, SkipModeMatchesFullChainMoments) {
  const std::uint32_t n = 500, k = 3;
  TrackedCoalescent skip(n, k, TrackedMode::kSkip);
  const Label tracked[] = {1, 2, 3};
  const int reps = 20000;
  double sd = 0, sh = 0, ss = 0, st = 0;
  double fd = 0, fh = 0, fs = 0, ft = 0;
  for (int r = 0; r < reps; ++r) {
    Rng a = Rng::for_stream(3, r);
    skip.run(a);
    for (Label v = 1; v <= k; ++v) {
      sd += skip.degree(v);
      sh += skip.depth(v);
      ss += skip.record(v).steps.size();
    }
    st += tau_k(skip.records(), k);
    Rng b = Rng::for_stream(4, r);
    const auto run = run_kingman(n, b, tracked);
    const auto deg = degrees(run.final_tree);
    for (Label v = 1; v <= k; ++v) {
      fd += deg[v];
      fh += run.record(v).depth();
      fs += run.record(v).steps.size();
    }
    ft += tau_k(run.records, k);
  }
  const double m = reps * static_cast<double>(k);
  EXPECT_NEAR(sd / m, fd / m, 0.05);
  EXPECT_NEAR(sh / m, fh / m, 0.08);
  EXPECT_NEAR(ss / m, fs / m, 0.08);
  EXPECT_NEAR(st / reps, ft / reps, 0.05 * ft / reps);
}

// Early rejection accepts with probability P(d(1) >= m, d(2) >= m').
TEST(Tracked, EarlyRejectionAcceptanceRate) {
  const std::uint32_t n = 6;
  // Exact P(d(1) >= 2, d(2) >= 1) by enumeration.
  Rational exact(0);
  const Rational w(1, static_cast<std::int64_t>(factorial(n) * factorial(n - 1)));
  for_each_chain(n, [&](const CoalescentChain& c) {
    const auto deg = degrees(replay_chain(c, {}).final_tree);
    if (deg[1] >= 2 && deg[2] >= 1) exact += w;
  });
  const std::uint32_t min_degree[] = {2, 1};
  for (auto mode : {TrackedMode::kSkip, TrackedMode::kStepwise}) {
    TrackedCoalescent tc(n, 2, mode);
    int accepted = 0;
    const int reps = 200000;
    for (int r = 0; r < reps; ++r) {
      Rng rng = Rng::for_stream(5, r);
      if (tc.run(rng, min_degree)) {
        ++accepted;
        EXPECT_GE(tc.degree(1), 2u);
        EXPECT_GE(tc.degree(2), 1u);
      }
    }
    const double p = exact.to_double();
    EXPECT_NEAR(static_cast<double>(accepted) / reps, p, 5 * std::sqrt(p * (1 - p) / reps));
  }
}

TEST(Tracked, AllVerticesTracked) {
  TrackedCoalescent tc(8, 8, TrackedMode::kSkip);
  for (int r = 0; r < 1000; ++r) {
    Rng rng = Rng::for_stream(6, r);
    tc.run(rng);
    std::uint32_t degree_sum = 0, roots = 0;
    for (Label v = 1; v <= 8; ++v) {
      degree_sum += tc.degree(v);
      roots += tc.depth(v) == 0;
    }
    EXPECT_EQ(degree_sum, 7u);
    EXPECT_EQ(roots, 1u);
  }
}
