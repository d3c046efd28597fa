#include <gtest/gtest.h>

#include <cmath>

#include "rrtlab/fdd.hpp"

using namespace rrtlab;

TEST(Interval, Containment) {
  const auto left = Interval::at_most(0.0);
  EXPECT_TRUE(left.contains(0.0));
  EXPECT_TRUE(left.contains(-1e300));
  EXPECT_FALSE(left.contains(1e-12));
  const Interval mid{-1.0, 2.0};
  EXPECT_FALSE(mid.contains(-1.0));
  EXPECT_TRUE(mid.contains(2.0));
  EXPECT_TRUE(Interval::real_line().contains(123.0));
  EXPECT_TRUE(Interval::above(3.0).contains(1e9));
  EXPECT_FALSE(Interval::above(3.0).contains(3.0));
}

TEST(Interval, Disjointness) {
  EXPECT_TRUE(Interval::at_most(0).disjoint(Interval::above(0)));
  EXPECT_FALSE(Interval::at_most(0.5).disjoint(Interval::above(0)));
  EXPECT_TRUE((Interval{0, 1}).disjoint(Interval{1, 2}));
}

TEST(Parse, MixedSequence) {
  const auto f = CanonicalFdd::parse("-1:(-inf,0], -1:(0,inf), 0:(-1.5,2], >=1:R");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f.exact_count(), 3u);
  EXPECT_EQ(f.entries()[0].level, -1);
  EXPECT_TRUE(std::isinf(f.entries()[0].interval.lower));
  EXPECT_EQ(f.entries()[0].interval.upper, 0.0);
  EXPECT_EQ(f.entries()[2].interval.lower, -1.5);
  EXPECT_TRUE(f.entries()[3].tail);
  EXPECT_EQ(f.entries()[3].interval, Interval::real_line());
  EXPECT_EQ(f.min_level(), -1);
}

TEST(Parse, RoundTrip) {
  const auto f = CanonicalFdd::parse("0:(-inf,0],>=2:(0,inf),>=2:(-inf,0]");
  EXPECT_EQ(CanonicalFdd::parse(f.to_string()).to_string(), f.to_string());
}

TEST(Parse, OnlyTailOrOnlyExact) {
  EXPECT_EQ(CanonicalFdd::parse(">=0:R").exact_count(), 0u);
  EXPECT_EQ(CanonicalFdd::parse("0:R,1:R,+2:R").exact_count(), 3u);
}

TEST(Parse, Malformed) {
  for (const char* bad : {"", "0", "0:", "x:R", "0:(1,2)", "0:(1,inf]", "0:[1,2]", "0:(a,2]",
                          "0:(1,2],", "0:(1,2]]", ">=0R"}) {
    EXPECT_THROW(CanonicalFdd::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Canonical, Ordering) {
  EXPECT_THROW(CanonicalFdd::parse("1:R,0:R"), std::invalid_argument);
  EXPECT_THROW(CanonicalFdd::parse(">=1:R,0:R"), std::invalid_argument);
  EXPECT_THROW(CanonicalFdd::parse("1:R,>=1:(0,inf)"), std::invalid_argument);
  EXPECT_THROW(CanonicalFdd::parse(">=1:(0,inf),>=2:(-inf,0]"), std::invalid_argument);
}

TEST(Canonical, DisjointAtSameLevel) {
  EXPECT_THROW(CanonicalFdd::parse("0:(-inf,1],0:(0,inf)"), std::invalid_argument);
  EXPECT_NO_THROW(CanonicalFdd::parse("0:(-inf,0],0:(0,inf)"));
  EXPECT_NO_THROW(CanonicalFdd::parse("0:(-inf,1],1:(0,inf)"));
  EXPECT_THROW(CanonicalFdd::parse("0:(2,1]"), std::invalid_argument);
}
