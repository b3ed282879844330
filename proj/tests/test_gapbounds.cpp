#include "maxgap/gapbounds.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "maxgap/env.hpp"

using namespace maxgap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IntervalSnapshot snap(std::vector<std::pair<double, double>> iv) {
  IntervalSnapshot s;
  for (auto [l, r] : iv) {
    s.lower.push_back(l);
    s.upper.push_back(r);
  }
  return s;
}

IntervalSnapshot random_snapshot(RngStream& rng, std::size_t k, double point_rate = 0.15) {
  IntervalSnapshot s;
  for (std::size_t i = 0; i < k; ++i) {
    const double u = rng.uniform(0.0, 1.0);
    double lo, hi;
    if (i > 0 && u < 0.1) {
      const std::size_t j = rng.next_u64() % i;
      lo = s.lower[j];
      hi = s.upper[j];
    } else {
      auto pick = [&] { return rng.uniform(0.0, 1.0) < 0.5 ? std::floor(rng.uniform(0.0, 9.0)) / 8.0 : rng.uniform(0.0, 1.0); };
      lo = pick();
      hi = rng.uniform(0.0, 1.0) < point_rate ? lo : pick();
      if (lo > hi) std::swap(lo, hi);
    }
    s.lower.push_back(lo);
    s.upper.push_back(hi);
  }
  return s;
}

IntervalSnapshot reflect(const IntervalSnapshot& s) {
  IntervalSnapshot r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.lower.push_back(-s.upper[i]);
    r.upper.push_back(-s.lower[i]);
  }
  return r;
}

std::vector<double> candidates(std::size_t arm, const IntervalSnapshot& s) {
  std::vector<double> c{s.lower[arm], s.upper[arm]};
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (double e : {s.lower[j], s.upper[j]}) {
      if (e >= s.lower[arm] && e <= s.upper[arm]) c.push_back(e);
    }
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

// Walks the full product of placements; no separability shortcut.
SidedGap literal_enumeration(std::size_t arm, const IntervalSnapshot& s) {
  const std::size_t k = s.size();
  std::vector<std::vector<double>> cand(k);
  for (std::size_t i = 0; i < k; ++i) cand[i] = candidates(i, s);
  std::vector<std::size_t> pos(k, 0);
  std::vector<double> mu(k);
  SidedGap best{-kInf, -kInf};
  while (true) {
    for (std::size_t i = 0; i < k; ++i) mu[i] = cand[i][pos[i]];
    for (std::size_t b = 0; b < k; ++b) {
      if (b == arm) continue;
      bool right_ok = true, left_ok = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (i == arm || i == b) continue;
        if (mu[arm] < mu[i] && mu[i] < mu[b]) right_ok = false;
        if (mu[b] < mu[i] && mu[i] < mu[arm]) left_ok = false;
      }
      if (right_ok) best.right = std::max(best.right, mu[b] - mu[arm]);
      if (left_ok) best.left = std::max(best.left, mu[arm] - mu[b]);
    }
    std::size_t i = 0;
    while (i < k && ++pos[i] == cand[i].size()) pos[i++] = 0;
    if (i == k) break;
  }
  return best;
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

TEST(AnchorGap, RightNearestBranch) {
  const auto s = snap({{0.3, 0.5}, {0.7, 0.9}, {0.6, 1.2}});
  EXPECT_DOUBLE_EQ(right_anchor_gap(0, 0.5, s), 0.4);
}

TEST(AnchorGap, RightFallbackBranch) {
  const auto s = snap({{0.3, 0.5}, {0.1, 0.6}, {0.2, 0.8}});
  EXPECT_DOUBLE_EQ(right_anchor_gap(0, 0.5, s), 0.3);
}

TEST(AnchorGap, RightNegativeBeyondEverything) {
  const auto s = snap({{0.3, 0.5}, {0.1, 0.6}, {0.2, 0.8}});
  EXPECT_LT(right_anchor_gap(0, 2.0, s), 0.0);
}

TEST(AnchorGap, LeftNearestBranch) {
  const auto s = snap({{1.0, 1.2}, {0.2, 0.5}, {0.3, 0.6}});
  EXPECT_DOUBLE_EQ(left_anchor_gap(0, 1.0, s), 0.7);
}

TEST(AnchorGap, LeftFallbackBranch) {
  const auto s = snap({{0.0, 0.4}, {0.2, 0.5}, {0.3, 0.6}});
  EXPECT_DOUBLE_EQ(left_anchor_gap(0, 0.4, s), 0.4 - 0.2);
}

TEST(AnchorGap, ReflectionSwapsSides) {
  RngStream rng(3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 3 + rng.next_u64() % 6;
    const auto s = random_snapshot(rng, k);
    const auto r = reflect(s);
    const std::size_t a = rng.next_u64() % k;
    const double x = rng.uniform(-0.2, 1.2);
    ASSERT_EQ(bits(left_anchor_gap(a, x, s)), bits(right_anchor_gap(a, -x, r)));
  }
}

TEST(UpperGap, SeparatedIntervals) {
  const double w = 0.05;
  const auto s = snap({{-w, w}, {1 - w, 1 + w}, {3 - w, 3 + w}});
  const UpperGap g = upper_gap(1, s);
  EXPECT_GE(g.value, 2.0);
  EXPECT_LE(g.value, 2.0 + 4 * w);
}

TEST(UpperGap, IdenticalIntervals) {
  const auto s = snap({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(upper_gap(a, s).value, 1.0);
}

TEST(UpperGap, PointIntervalsGiveTrueGaps) {
  const std::vector<double> means{0.0, 1.0, 3.0, 3.5, -1.5};
  IntervalSnapshot s;
  for (double m : means) {
    s.lower.push_back(m);
    s.upper.push_back(m);
  }
  const Instance inst = instance_from_means(means);
  for (std::size_t a = 0; a < means.size(); ++a) {
    EXPECT_EQ(upper_gap(a, s).value, inst.truth().arm_gap[a]);
    const SidedGap bf = brute_force_upper_gap(a, s);
    EXPECT_EQ(std::max(bf.right, bf.left), inst.truth().arm_gap[a]);
  }
}

TEST(UpperGap, WitnessAnchorsAttainBound) {
  RngStream rng(8);
  for (int t = 0; t < 500; ++t) {
    const auto s = random_snapshot(rng, 6);
    for (std::size_t a = 0; a < 6; ++a) {
      const UpperGap g = upper_gap(a, s);
      EXPECT_EQ(g.right, right_anchor_gap(a, s.lower[g.right_anchor], s));
      EXPECT_EQ(g.left, left_anchor_gap(a, s.upper[g.left_anchor], s));
    }
  }
}

TEST(BruteForce, SmallExample) {
  const auto s = snap({{0, 0.1}, {0.5, 0.6}, {0.55, 0.7}});
  EXPECT_DOUBLE_EQ(brute_force_upper_gap(0, s).right, 0.6);
}

TEST(BruteForce, TooManyArms) {
  RngStream rng(1);
  EXPECT_THROW(brute_force_upper_gap(0, random_snapshot(rng, 9)), std::invalid_argument);
}

TEST(BruteForce, MatchesLiteralEnumeration) {
  RngStream rng(21);
  for (std::size_t k = 3; k <= 5; ++k) {
    const int n = k == 5 ? 60 : 400;
    for (int t = 0; t < n; ++t) {
      const auto s = random_snapshot(rng, k);
      for (std::size_t a = 0; a < k; ++a) {
        const SidedGap lit = literal_enumeration(a, s);
        const SidedGap bf = brute_force_upper_gap(a, s);
        ASSERT_EQ(lit.right, bf.right);
        ASSERT_EQ(lit.left, bf.left);
      }
    }
  }
}

TEST(UpperGap, MatchesBruteForce) {
  RngStream rng(99);
  for (std::size_t k = 3; k <= kBruteForceMaxArms; ++k) {
    for (int t = 0; t < 1000; ++t) {
      const auto s = random_snapshot(rng, k);
      for (std::size_t a = 0; a < k; ++a) {
        const UpperGap g = upper_gap(a, s);
        const SidedGap bf = brute_force_upper_gap(a, s);
        ASSERT_NEAR(g.right, bf.right, 1e-12);
        ASSERT_NEAR(g.left, bf.left, 1e-12);
      }
    }
  }
}

TEST(Engine, MatchesDirectBitwise) {
  RngStream rng(4);
  GapBoundEngine engine;
  GapBounds b;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t k = 2 + rng.next_u64() % 40;
    const auto s = random_snapshot(rng, k);
    engine.compute(s, b);
    for (std::size_t a = 0; a < k; ++a) {
      const UpperGap g = upper_gap(a, s);
      ASSERT_EQ(bits(b.right[a]), bits(g.right));
      ASSERT_EQ(bits(b.left[a]), bits(g.left));
      ASSERT_EQ(bits(b.value[a]), bits(g.value));
    }
  }
}

TEST(Engine, SubsetLeavesOthersUnset) {
  RngStream rng(6);
  GapBoundEngine engine;
  GapBounds full, part;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 3 + rng.next_u64() % 30;
    const auto s = random_snapshot(rng, k);
    std::vector<std::size_t> arms;
    for (std::size_t a = 0; a < k; ++a) {
      if (rng.uniform(0.0, 1.0) < 0.3) arms.push_back(a);
    }
    engine.compute(s, full);
    engine.compute(s, arms, part);
    for (std::size_t a = 0; a < k; ++a) {
      if (std::find(arms.begin(), arms.end(), a) != arms.end()) {
        ASSERT_EQ(bits(part.value[a]), bits(full.value[a]));
      } else {
        ASSERT_TRUE(std::isnan(part.value[a]));
      }
    }
  }
}

TEST(Engine, LeadersAgreeWithFullVector) {
  RngStream rng(12);
  GapBoundEngine engine;
  GapBounds full, lead;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t k = 2 + rng.next_u64() % 50;
    // narrow intervals make pruning bite
    IntervalSnapshot s;
    for (std::size_t i = 0; i < k; ++i) {
      const double c = std::floor(rng.uniform(0.0, 40.0)) / 8.0;
      const double w = t % 2 ? rng.uniform(0.0, 0.3) : rng.uniform(0.0, 3.0);
      s.lower.push_back(c - w);
      s.upper.push_back(c + w);
    }
    engine.compute(s, full);
    std::vector<double> sorted = full.value;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t depth : {1u, 2u}) {
      engine.compute_leaders(s, depth, lead);
      for (std::size_t a = 0; a < k; ++a) {
        if (!std::isnan(lead.value[a])) {
          ASSERT_EQ(bits(lead.value[a]), bits(full.value[a]));
        } else {
          // skipped arms sit strictly below the top `depth` distinct values
          ASSERT_LT(full.value[a], sorted[std::min(depth, sorted.size()) - 1]);
        }
      }
    }
  }
}

TEST(Engine, SharedMaximum) {
  RngStream rng(15);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t k = 2 + rng.next_u64() % 30;
    const GapBounds b = upper_gaps(random_snapshot(rng, k));
    ASSERT_GE(argmax_set(b.value).size(), 2u);
  }
}

TEST(Engine, ReflectionSwapsSides) {
  RngStream rng(16);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + rng.next_u64() % 30;
    const auto s = random_snapshot(rng, k);
    const GapBounds b = upper_gaps(s), r = upper_gaps(reflect(s));
    for (std::size_t a = 0; a < k; ++a) {
      ASSERT_EQ(bits(b.right[a]), bits(r.left[a]));
      ASSERT_EQ(bits(b.left[a]), bits(r.right[a]));
    }
  }
}

TEST(Engine, MonotoneUnderNesting) {
  RngStream rng(18);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 3 + rng.next_u64() % 20;
    IntervalSnapshot s = random_snapshot(rng, k, 0.0);
    GapBounds prev = upper_gaps(s);
    for (int step = 0; step < 20; ++step) {
      for (std::size_t a = 0; a < k; ++a) {
        if (rng.uniform(0.0, 1.0) < 0.5) continue;
        const double lo = rng.uniform(s.lower[a], s.upper[a]);
        const double hi = rng.uniform(lo, s.upper[a]);
        s.lower[a] = lo;
        s.upper[a] = std::max(lo, hi);
      }
      const GapBounds next = upper_gaps(s);
      for (std::size_t a = 0; a < k; ++a) {
        ASSERT_LE(next.right[a], prev.right[a]);
        ASSERT_LE(next.left[a], prev.left[a]);
      }
      prev = next;
    }
  }
}

TEST(LowerGap, HandExample) {
  const auto s = snap({{0.9, 1.1}, {0.8, 1.0}, {0.0, 0.2}});
  const std::vector<double> means{1.0, 0.9, 0.1};
  const LowerGap g = lower_max_gap(s, means);
  EXPECT_DOUBLE_EQ(g.value, 0.6);
  EXPECT_EQ(g.split, 2u);
}

TEST(LowerGap, OverlapIsNotCertified) {
  RngStream rng(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 2 + rng.next_u64() % 10;
    IntervalSnapshot s;
    std::vector<double> means;
    for (std::size_t i = 0; i < k; ++i) {
      s.lower.push_back(rng.uniform(-1.0, 0.5));
      s.upper.push_back(rng.uniform(0.5, 2.0));
      means.push_back(rng.uniform(0.0, 1.0));
    }
    EXPECT_LE(lower_max_gap(s, means).value, 0.0);
  }
}

TEST(LowerGap, TiesBrokenByIndex) {
  const std::vector<double> means{0.5, 0.5, 0.1};
  const auto order = empirical_order(means);
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(LowerGap, BelowTrueMaxGapWhenCovered) {
  RngStream rng(30);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 3 + rng.next_u64() % 10;
    std::vector<double> mu;
    for (std::size_t i = 0; i < k; ++i) mu.push_back(rng.uniform(0.0, 5.0));
    const Instance inst = instance_from_means(mu);
    IntervalSnapshot s;
    std::vector<double> hat;
    for (double m : mu) {
      const double lo = m - rng.uniform(0.0, 0.3), hi = m + rng.uniform(0.0, 0.3);
      s.lower.push_back(lo);
      s.upper.push_back(hi);
      hat.push_back(rng.uniform(lo, hi));
    }
    ASSERT_LE(lower_max_gap(s, hat).value, inst.truth().max_gap);
    const GapBounds b = upper_gaps(s);
    for (std::size_t a = 0; a < k; ++a) ASSERT_GE(b.value[a], inst.truth().arm_gap[a]);
  }
}
