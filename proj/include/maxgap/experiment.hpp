#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxgap/algorithms.hpp"
#include "maxgap/env.hpp"

namespace maxgap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat experiment description. Every key can come from a JSON object with
/// the same field names; unknown keys are rejected.
struct ExperimentConfig {
  // two-gap | one-gap | lower-bound | lower-bound-alt | streetview-like | path to a means file
  std::string instance = "two-gap";
  std::optional<double> sigma;  // means files (default 1) and one-gap (default 1)
  std::size_t arms = 24;        // one-gap
  double min_gap = 0.2;         // one-gap
  double max_gap = 1.0;         // one-gap
  double nu = 1.0;              // lower-bound instances
  double eps = 0.1;

  std::vector<std::string> algorithms{"uniform", "maxgap-ucb"};
  double delta = 0.1;
  std::uint64_t trials = 10;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> checkpoints;  // empty: log grid below
  std::uint64_t checkpoint_min = 0;        // 0: K
  std::uint64_t checkpoint_max = 1'000'000;
  std::size_t checkpoint_count = 20;
  double ucb_stop_factor = 10.0;
  std::uint64_t budget_cap = 10'000'000;
  bool elim_early_stop = false;
  double alpha = 1.0;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);
void validate(const ExperimentConfig& config);

Instance make_instance(const ExperimentConfig& config);

/// `count` log-spaced integer budgets in [lo, hi], deduplicated.
std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t count);

/// Explicit checkpoints, or the log grid from the config.
std::vector<std::uint64_t> checkpoint_schedule(const ExperimentConfig& config, std::size_t arms);

struct TrialOutcome {
  Algorithm algorithm = Algorithm::uniform;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> checkpoint_samples;
  std::vector<bool> checkpoint_stopped;
  std::vector<bool> checkpoint_error;
  std::uint64_t stop_samples = 0;
  bool truncated = false;
  bool stop_error = false;
  bool good_event = true;
  std::vector<std::uint64_t> counts;  // at stop
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::uniform;
  std::vector<double> error_rate;  // per checkpoint, all trials
  std::vector<double> error_std;   // binomial sqrt(p (1 - p))
  double stop_error_rate = 0.0;    // over non-truncated runs
  double stop_error_std = 0.0;
  std::uint64_t completed = 0;     // non-truncated runs
  double mean_stop_samples = 0.0;  // over non-truncated runs
};

struct ExperimentResult {
  std::vector<std::uint64_t> checkpoints;
  std::vector<TrialOutcome> trials;  // algorithm-major, then trial
  std::vector<AlgorithmSummary> summaries;
};

/// Runs every (algorithm, trial) pair with seed + trial. Uniform sampling runs
/// to the last checkpoint. Results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, const Instance& instance);

/// Long-form CSV of an experiment.
void write_results(std::ostream& out, const ExperimentResult& result);

/// First checkpoint budget whose error rate is below (or at, when
/// `inclusive`) the threshold.
std::optional<std::uint64_t> first_budget_below(const ExperimentResult& result, Algorithm algorithm,
                                                double threshold, bool inclusive = false);

/// One MaxGapUCB run with the configured seed; per-arm counts at each
/// checkpoint as CSV `checkpoint,total_samples,arm,rank,mean,count`.
void allocation_profile(const ExperimentConfig& config, const Instance& instance, std::ostream& out);

struct BoundCheck {
  std::size_t arms = 0;
  std::size_t snapshots = 0;
  double max_discrepancy = 0.0;
  std::optional<std::string> counterexample;  // JSON
};

/// Compares the engine and the direct per-arm bound against the brute-force
/// oracle on random snapshots with ties, point intervals and repeated
/// intervals. Stops at the first discrepancy above 1e-12.
BoundCheck verify_bounds(std::size_t arms, std::size_t snapshots, std::uint64_t seed);

void write_bound_check(std::ostream& out, const BoundCheck& check);

/// Long-form CSV `arm,quantity,value`; aggregate rows use arm `all`.
void hardness_report(const ExperimentConfig& config, const Instance& instance, std::ostream& out);

}  // namespace maxgap
