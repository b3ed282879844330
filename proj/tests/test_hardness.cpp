#include "maxgap/hardness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace maxgap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instance random_instance(RngStream& rng) {
  while (true) {
    const std::size_t k = 3 + rng.next_u64() % 30;
    std::vector<double> means;
    for (std::size_t i = 0; i < k; ++i) means.push_back(rng.uniform(-3.0, 3.0));
    try {
      return instance_from_means(means);
    } catch (const InstanceError&) {
    }
  }
}

}  // namespace

TEST(Gamma, LowerBoundInstance) {
  const Instance inst = build_lower_bound_instance(1.0, 0.1);
  const SidedHardness g = gamma(inst);
  EXPECT_EQ(g.value[3], 0.1);
  EXPECT_DOUBLE_EQ(g.right[3], 0.1);
  EXPECT_EQ(g.left[3], kInf);
  EXPECT_NEAR(g.value[0], 0.1, 1e-12);
  EXPECT_EQ(g.right[0], kInf);
  EXPECT_EQ(g.value[1], kInf);
  EXPECT_EQ(g.value[2], kInf);
}

TEST(Gamma, OneGapComputedValues) {
  // grid 0.1, means 0.0 .. 1.1 and 2.1 .. 3.2
  const Instance fine = build_one_gap_instance(24, 0.1, 1.0);
  const SidedHardness g = gamma(fine);
  EXPECT_EQ(g.value[11], kInf);
  EXPECT_EQ(g.value[12], kInf);
  EXPECT_EQ(g.left[0], kInf);
  EXPECT_NEAR(g.value[0], 0.5, 1e-12);
  EXPECT_NEAR(g.value[6], 0.5, 1e-12);
  // one side only reaches the edge arm 0.1 away
  EXPECT_NEAR(g.right[1], 0.5, 1e-12);
  EXPECT_NEAR(g.value[1], 0.1, 1e-12);
  // the right side of arm 10 is cut off by the max gap
  EXPECT_NEAR(g.right[10], 0.1, 1e-12);
  EXPECT_NEAR(g.value[10], 0.1, 1e-12);
  // grid 0.2: the best helper is 0.4 or 0.6 away, neither reaches 0.5
  const Instance coarse = build_one_gap_instance(24, 0.2, 1.0);
  const SidedHardness h = gamma(coarse);
  EXPECT_NEAR(h.value[5], 0.4, 1e-12);
  EXPECT_NEAR(h.value[0], 0.4, 1e-12);
}

TEST(Rho, LowerBoundInstance) {
  const Instance inst = build_lower_bound_instance(1.0, 0.1);
  const SidedHardness r = rho(inst);
  EXPECT_DOUBLE_EQ(r.right[3], 0.025);
  EXPECT_EQ(r.left[3], kInf);
  EXPECT_DOUBLE_EQ(r.value[3], 0.025);
}

TEST(Rho, TopArmBoundaryTermOnTwoGap) {
  const Instance inst = build_two_gap_instance();
  const SidedHardness r = rho(inst);
  const double mg = inst.truth().max_gap;
  const double span = inst.arm(0).mean - inst.arm(23).mean;
  EXPECT_LT((mg - span) / 8, 0.0);
  EXPECT_EQ(r.right[0], kInf);
  // 0.2 away: min{0.05, 0.1}; 0.4 away: min{0.1, 0.075}; 0.6 away: min{0.15, 0.05}
  EXPECT_NEAR(r.left[0], 0.075, 1e-12);
}

TEST(NaiveGamma, Values) {
  const Instance inst = build_lower_bound_instance(1.0, 0.1);
  EXPECT_DOUBLE_EQ(naive_gamma(inst).value[3], 0.1);
  const Instance one = build_one_gap_instance(24, 0.1, 1.0);
  const SidedHardness n = naive_gamma(one);
  for (std::size_t a = 0; a < 24; ++a) {
    if (a != 11 && a != 12) {
      EXPECT_NEAR(n.value[a], 0.1, 1e-12);
    }
  }
}

TEST(Hardness, RandomInstancesPositiveAndOrdered) {
  RngStream rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng);
    const HardnessReport r = analyze_hardness(inst);
    for (std::size_t a = 0; a < inst.size(); ++a) {
      if (r.optimal[a]) {
        EXPECT_EQ(r.gamma.value[a], kInf);
        continue;
      }
      EXPECT_GT(r.gamma.value[a], 0.0);
      EXPECT_TRUE(std::isfinite(r.gamma.value[a]));
      EXPECT_GT(r.rho.value[a], 0.0);
      EXPECT_LE(r.naive.value[a], r.gamma.value[a]);
      EXPECT_LE(r.gamma.value[a], inst.truth().max_gap / 2);
    }
    EXPECT_NO_THROW(predicted_complexity(r, 0.1));
  }
}

TEST(Hardness, ReflectionSwapsSides) {
  RngStream rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng);
    std::vector<double> flipped;
    for (double m : inst.means()) flipped.push_back(-m);
    const Instance mirror = instance_from_means(flipped);
    const SidedHardness g = gamma(inst), h = gamma(mirror);
    const SidedHardness r = rho(inst), s = rho(mirror);
    for (std::size_t a = 0; a < inst.size(); ++a) {
      EXPECT_EQ(g.right[a], h.left[a]);
      EXPECT_EQ(g.left[a], h.right[a]);
      EXPECT_EQ(g.value[a], h.value[a]);
      EXPECT_EQ(r.right[a], s.left[a]);
      EXPECT_EQ(r.left[a], s.right[a]);
    }
  }
}

TEST(Predicted, SingleTerm) {
  const std::vector<double> means{0.0, 0.5, 1.6};
  const HardnessReport r = analyze_hardness(instance_from_means(means));
  ASSERT_DOUBLE_EQ(r.gamma.value[0], 0.5);
  const PredictedComplexity p = predicted_complexity(r, 0.1);
  EXPECT_NEAR(p.main, std::log(60.0) / 0.25, 1e-12);
  EXPECT_NEAR(p.main, 16.38, 0.01);
  EXPECT_DOUBLE_EQ(p.ucb, 6 * p.main);
  EXPECT_DOUBLE_EQ(predicted_complexity(r, 0.1, 2.5).main, 2.5 * p.main);
}

TEST(Predicted, DoublingGammaQuartersTerms) {
  HardnessReport r;
  r.optimal = {true, true, false, false};
  r.gamma.value = {kInf, kInf, 0.05, 0.1};
  r.rho.value = {kInf, kInf, 0.01, 0.02};
  const double base = predicted_complexity(r, 0.1).main;
  for (double& g : r.gamma.value) g *= 2;
  const double doubled = predicted_complexity(r, 0.1).main;
  EXPECT_LT(doubled, base / 4);
  EXPECT_GT(doubled, base / 5);
}

TEST(Predicted, ElimAboveMainWhenRhoSmaller) {
  const HardnessReport r = analyze_hardness(build_two_gap_instance());
  for (std::size_t a = 0; a < r.optimal.size(); ++a) {
    if (!r.optimal[a]) {
      ASSERT_LE(r.rho.value[a], r.gamma.value[a]);
    }
  }
  const PredictedComplexity p = predicted_complexity(r, 0.1);
  EXPECT_GE(p.elim, p.main);
}

TEST(Predicted, DegenerateRejected) {
  HardnessReport r;
  r.optimal = {true, true, false};
  r.gamma.value = {kInf, kInf, 0.0};
  r.rho.value = {kInf, kInf, 0.1};
  EXPECT_THROW(predicted_complexity(r, 0.1), DegenerateInstanceError);
  r.gamma.value[2] = 0.2;
  r.rho.value[2] = -0.1;
  EXPECT_THROW(predicted_complexity(r, 0.1), DegenerateInstanceError);
  r.rho.value[2] = 0.1;
  EXPECT_THROW(predicted_complexity(r, 1.5), std::invalid_argument);
}
