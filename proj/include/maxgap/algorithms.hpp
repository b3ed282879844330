#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maxgap/env.hpp"

namespace maxgap {

enum class Algorithm { elimination, ucb, top2_ucb, uniform, naive };

std::string_view to_string(Algorithm algorithm);
/// Accepts "maxgap-elim", "maxgap-ucb", "maxgap-top2ucb", "uniform", "naive".
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct RunConfig {
  double delta = 0.1;
  double ucb_stop_factor = 10.0;          // c in the MaxGapUCB pair-dominance stop
  std::uint64_t budget_cap = 10'000'000;  // total samples
  bool elim_early_stop = false;
  std::vector<std::uint64_t> checkpoints;  // strictly increasing budgets
  bool record_rounds = false;              // keep per-round records (memory heavy)
};

struct Clustering {
  std::vector<std::size_t> top;     // ascending arm indices
  std::vector<std::size_t> bottom;  // ascending arm indices

  bool operator==(const Clustering&) const = default;
};

struct RoundRecord {
  std::uint64_t round = 0;
  std::vector<std::size_t> sampled;
  std::vector<std::uint64_t> counts;
  std::vector<double> lower_env;
  std::vector<double> upper_env;
  std::vector<double> gap_upper;        // NaN where not evaluated
  std::vector<double> gap_upper_right;
  std::vector<double> gap_upper_left;
  double gap_lower = 0.0;
  std::size_t gap_lower_split = 0;
  std::vector<std::size_t> active;      // elimination: active set after the round
  std::vector<std::size_t> top1;        // UCB variants: arms at the largest bound
  std::vector<std::size_t> top2;        // Top2UCB: arms at the second largest bound
  bool good_event = true;               // raw intervals covered the means this round
};

struct CheckpointRecord {
  std::uint64_t budget = 0;
  std::uint64_t total_samples = 0;  // samples drawn when the clustering was read
  bool stopped = false;             // the algorithm had already terminated
  std::vector<std::uint64_t> counts;
  Clustering clusters;
};

enum class StopReason { converged, early_stop_rule, budget_exhausted };

std::string_view to_string(StopReason reason);

struct RunTrace {
  Algorithm algorithm = Algorithm::uniform;
  std::vector<RoundRecord> rounds;  // filled only with RunConfig::record_rounds
  std::vector<CheckpointRecord> checkpoints;
  std::uint64_t stop_round = 0;
  std::uint64_t total_samples = 0;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> eliminated_round;  // elimination only; 0 = never eliminated
  Clustering clusters;
  StopReason reason = StopReason::converged;
  bool truncated = false;   // an adaptive run hit budget_cap before its stop rule
  std::uint64_t degenerate_rounds = 0;  // Top2UCB rounds where every arm shared one bound
  bool good_event = true;   // raw intervals covered every mean at every round
  std::uint64_t first_good_event_failure = 0;  // round, 0 if never
};

/// Splits arms at the largest adjacent gap of the empirical means. The top
/// cluster holds the arms above the split. Ties in the gap go to the split
/// with the smaller top cluster.
Clustering report_clusters(std::span<const double> empirical_means);

/// Clustering of an instance's ground truth.
Clustering true_clusters(const Instance& instance);

RunTrace max_gap_elim(const Instance& instance, const RunConfig& config, RngStream& rng);
RunTrace max_gap_ucb(const Instance& instance, const RunConfig& config, RngStream& rng);
RunTrace max_gap_top2_ucb(const Instance& instance, const RunConfig& config, RngStream& rng);
RunTrace uniform_baseline(const Instance& instance, const RunConfig& config, RngStream& rng);
RunTrace naive_sort_then_bai(const Instance& instance, const RunConfig& config, RngStream& rng);

RunTrace run_algorithm(Algorithm algorithm, const Instance& instance, const RunConfig& config, RngStream& rng);

/// Deterministic text form of a trace (used for byte-level reproducibility checks).
std::string serialize(const RunTrace& trace);

}  // namespace maxgap
