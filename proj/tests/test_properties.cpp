#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "maxgap/algorithms.hpp"
#include "trace_checks.hpp"

using namespace maxgap;

namespace {

const Algorithm kAll[] = {Algorithm::elimination, Algorithm::ucb, Algorithm::top2_ucb, Algorithm::uniform,
                          Algorithm::naive};

// rejection-sample instances until the largest gap is unique
Instance random_instance(RngStream& rng) {
  while (true) {
    const std::size_t k = 3 + rng.next_u64() % 6;
    std::vector<double> means;
    for (std::size_t i = 0; i < k; ++i) means.push_back(std::round(rng.uniform(0.0, 40.0)) / 10.0);
    const double sigma = rng.uniform(0.0, 1.0) < 0.2 ? 0.0 : rng.uniform(0.2, 1.0);
    try {
      return instance_from_means(means, sigma);
    } catch (const InstanceError&) {
    }
  }
}

void expect_clean(const Instance& inst, const RunTrace& t, const std::string& label) {
  const checks::TraceReport rep = checks::check_trace(inst, t);
  EXPECT_TRUE(rep.ok()) << label << ": " << (rep.ok() ? "" : rep.violations.front());
}

}  // namespace

TEST(Property, RandomInstancesAllAlgorithms) {
  RngStream gen(2024);
  int bad_event_runs = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_instance(gen);
    for (Algorithm a : kAll) {
      RunConfig cfg;
      cfg.record_rounds = true;
      cfg.budget_cap = 60000;
      // a loose delta makes interval failures common enough to exercise both branches
      cfg.delta = trial % 2 == 0 ? 0.1 : 0.9;
      cfg.checkpoints = {50, 500, 5000};
      RngStream rng(1000 + trial);
      const RunTrace t = run_algorithm(a, inst, cfg, rng);
      bad_event_runs += !t.good_event;
      expect_clean(inst, t, std::string(to_string(a)) + " trial " + std::to_string(trial));
    }
  }
  EXPECT_GT(bad_event_runs, 0);
}

TEST(Property, TwoGapPrefix) {
  const Instance inst = build_two_gap_instance();
  for (Algorithm a : {Algorithm::elimination, Algorithm::ucb, Algorithm::top2_ucb}) {
    for (std::uint64_t seed : {1u, 2u}) {
      RunConfig cfg;
      cfg.record_rounds = true;
      cfg.budget_cap = 100000;
      RngStream rng(seed);
      const RunTrace t = run_algorithm(a, inst, cfg, rng);
      EXPECT_GT(t.rounds.size(), 1u);
      expect_clean(inst, t, std::string(to_string(a)));
    }
  }
}

TEST(Property, EarlyStopElimination) {
  RngStream gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = random_instance(gen);
    RunConfig cfg;
    cfg.record_rounds = true;
    cfg.elim_early_stop = true;
    cfg.budget_cap = 60000;
    RngStream rng(trial);
    expect_clean(inst, max_gap_elim(inst, cfg, rng), "trial " + std::to_string(trial));
  }
}

// the checker itself must notice broken traces
TEST(Property, CheckerCatchesViolations) {
  const Instance inst = build_two_gap_instance();
  RunConfig cfg;
  cfg.record_rounds = true;
  cfg.budget_cap = 5000;
  RngStream rng(3);
  const RunTrace good = max_gap_elim(inst, cfg, rng);
  ASSERT_TRUE(checks::check_trace(inst, good).ok());
  ASSERT_GT(good.rounds.size(), 3u);

  RunTrace t = good;
  t.rounds[2].gap_upper[5] = t.rounds[1].gap_upper[5] + 1.0;
  EXPECT_FALSE(checks::check_trace(inst, t).ok());

  t = good;
  t.rounds[2].upper_env[0] = t.rounds[1].upper_env[0] + 1.0;
  EXPECT_FALSE(checks::check_trace(inst, t).ok());

  t = good;
  t.eliminated_round[4] = 1;
  EXPECT_FALSE(checks::check_trace(inst, t).ok());

  t = good;
  t.clusters.bottom.push_back(t.clusters.top.front());
  EXPECT_FALSE(checks::check_trace(inst, t).ok());

  t = good;
  for (RoundRecord& r : t.rounds) r.gap_upper.assign(inst.size(), 0.5);
  t.rounds[0].gap_upper[0] = 0.6;
  EXPECT_FALSE(checks::check_trace(inst, t).ok());
}
