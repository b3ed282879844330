#include "maxgap/confidence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace maxgap;

TEST(Radius, KnownValue) { EXPECT_NEAR(radius(1, 4, 0.1, 1.0), std::sqrt(std::log(160.0)), 1e-15); }

TEST(Radius, ScalesWithSigma) {
  for (std::uint64_t s : {1u, 7u, 1000u}) EXPECT_DOUBLE_EQ(radius(s, 24, 0.1, 2.0), 2.0 * radius(s, 24, 0.1, 1.0));
  EXPECT_EQ(radius(5, 4, 0.1, 0.0), 0.0);
}

TEST(Radius, QuarteringCountRoughlyHalves) {
  const double ratio = radius(400000, 10, 0.1, 1.0) / radius(100000, 10, 0.1, 1.0);
  EXPECT_NEAR(ratio, 0.5, 0.03);
  EXPECT_GT(ratio, 0.5);
}

TEST(Radius, Shape) {
  double prev = radius(1, 5, 0.05, 1.0);
  for (std::uint64_t s = 2; s < 5000; ++s) {
    const double r = radius(s, 5, 0.05, 1.0);
    EXPECT_LT(r, prev);
    EXPECT_GE(r * std::sqrt(static_cast<double>(s)), prev * std::sqrt(static_cast<double>(s - 1)));
    prev = r;
  }
}

TEST(Radius, Errors) {
  EXPECT_THROW(radius(0, 4, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(radius(1, 4, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(radius(1, 4, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(radius(1, 1, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(radius(1, 4, 0.1, -1.0), std::invalid_argument);
}

TEST(Update, FirstSample) {
  const ConfidenceParams p{4, 0.1};
  const ArmEstimate e = update({}, 0.3, p, 1.0);
  const double c = radius(1, 4, 0.1, 1.0);
  EXPECT_EQ(e.stats.count, 1u);
  EXPECT_DOUBLE_EQ(e.interval.lower, 0.3 - c);
  EXPECT_DOUBLE_EQ(e.interval.upper, 0.3 + c);
  EXPECT_EQ(e.interval.lower_env, e.interval.lower);
  EXPECT_EQ(e.interval.upper_env, e.interval.upper);
}

TEST(Update, EnvelopeMonotoneAndNested) {
  const ConfidenceParams p{10, 0.1};
  RngStream rng(3);
  ArmEstimate e;
  std::vector<IntervalState> history;
  for (int i = 0; i < 2000; ++i) {
    const ArmEstimate next = update(e, 0.5 + rng.standard_normal(), p, 1.0);
    if (i > 0) {
      EXPECT_GE(next.interval.lower_env, e.interval.lower_env);
      EXPECT_LE(next.interval.upper_env, e.interval.upper_env);
    }
    EXPECT_LE(next.interval.lower_env, next.interval.upper_env);
    EXPECT_LE(next.interval.lower, next.interval.upper);
    e = next;
    history.push_back(e.interval);
  }
  for (std::size_t s = 0; s < history.size(); s += 97) {
    EXPECT_GE(history.back().lower_env, history[s].lower);
    EXPECT_LE(history.back().upper_env, history[s].upper);
  }
}

TEST(Update, CrossingCollapsesInsideOldEnvelope) {
  const ConfidenceParams p{4, 0.1};
  ArmEstimate e = update({}, 0.0, p, 0.01);
  const IntervalState before = e.interval;
  // a wild sample pushes the raw interval clear of the envelope
  e = update(e, 100.0, p, 0.01);
  EXPECT_EQ(e.interval.lower_env, e.interval.upper_env);
  EXPECT_GE(e.interval.lower_env, before.lower_env);
  EXPECT_LE(e.interval.upper_env, before.upper_env);
}

TEST(GoodEvent, Basics) {
  const Instance zero({{0.1, 0.0}, {0.5, 0.0}, {2.0, 0.0}});
  const ConfidenceParams p{3, 0.1};
  std::vector<ArmEstimate> est(3);
  RngStream rng(1);
  for (int round = 0; round < 5; ++round) {
    for (std::size_t a = 0; a < 3; ++a) est[a] = update(est[a], sample(zero, a, rng), p, 0.0);
    EXPECT_TRUE(good_event_holds(zero, est));
  }
  est[1].interval.lower = 0.5;
  est[1].interval.upper = 0.6;
  const Instance off({{0.1, 0.0}, {0.7, 0.0}, {2.0, 0.0}});
  EXPECT_FALSE(good_event_holds(off, est));
  est[2] = {};
  EXPECT_THROW(good_event_holds(zero, est), std::invalid_argument);
}

TEST(Coverage, AnytimeRawIntervals) {
  const ConfidenceParams p{3, 0.05};
  RngStream rng(2024);
  int covered_runs = 0;
  const int runs = 500;
  for (int r = 0; r < runs; ++r) {
    ArmEstimate e;
    bool ok = true;
    for (int t = 0; t < 10000; ++t) {
      e = update(e, rng.standard_normal(), p, 1.0);
      ok = ok && e.interval.lower <= 0.0 && 0.0 <= e.interval.upper;
    }
    covered_runs += ok;
  }
  EXPECT_GE(covered_runs, 475);
}

// envelope covers the mean at every step exactly when the raw intervals do
TEST(Coverage, EnvelopeMatchesRaw) {
  const ConfidenceParams p{3, 0.5};
  RngStream rng(9);
  for (int r = 0; r < 2000; ++r) {
    ArmEstimate e;
    bool raw_ok = true, env_ok = true;
    for (int t = 0; t < 200; ++t) {
      e = update(e, 0.2 + 2.0 * rng.standard_normal(), p, 1.0);
      raw_ok = raw_ok && e.interval.lower <= 0.2 && 0.2 <= e.interval.upper;
      env_ok = env_ok && e.interval.lower_env <= 0.2 && 0.2 <= e.interval.upper_env;
      EXPECT_EQ(raw_ok, env_ok);
    }
  }
}
