#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxgap {

/// Raised when a set of arms cannot form a valid max-gap instance.
class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ArmSpec {
  double mean = 0.0;
  double sigma = 1.0;  // scale of the Gaussian reward noise
};

/// Ground truth of an instance. Ranks are 0-based: rank 0 is the largest mean.
struct TrueGaps {
  std::vector<double> arm_gap;      // per arm, max of its two adjacent gaps
  std::vector<double> rank_gap;     // rank_gap[k] = mean(rank k) - mean(rank k+1), size K-1
  double max_gap = 0.0;
  std::size_t split = 0;            // number of arms in the top cluster
  std::vector<std::size_t> top;     // arm indices, ascending
  std::vector<std::size_t> bottom;  // arm indices, ascending
};

/// Immutable set of arms with precomputed ordering and max-gap split.
///
/// Construction rejects K < 3, non-finite means, negative sigma and ties in
/// the largest adjacent gap (compared exactly on the given doubles).
class Instance {
 public:
  explicit Instance(std::vector<ArmSpec> arms);

  std::size_t size() const { return arms_.size(); }
  std::span<const ArmSpec> arms() const { return arms_; }
  const ArmSpec& arm(std::size_t index) const { return arms_.at(index); }

  /// order()[rank] is the arm holding that rank (descending mean, ties by index).
  std::span<const std::size_t> order() const { return order_; }
  std::size_t rank_of(std::size_t arm) const { return rank_.at(arm); }

  const TrueGaps& truth() const { return truth_; }
  bool in_top_cluster(std::size_t arm) const { return in_top_.at(arm); }

  std::vector<double> means() const;

 private:
  std::vector<ArmSpec> arms_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
  std::vector<bool> in_top_;
  TrueGaps truth_;
};

/// Seeded per-run source of standard normal variates.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double standard_normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Draws mean + sigma * z for the given arm. Throws std::out_of_range on a bad index.
double sample(const Instance& instance, std::size_t arm, RngStream& rng);

TrueGaps true_gaps(const Instance& instance);

/// Unit-variance arms in the given order, common sigma.
Instance instance_from_means(std::span<const double> means, double sigma = 1.0);

/// 24 unit-variance arms, arm i holding rank i. Adjacent gaps are 0.2 except
/// 0.98 between ranks 9/10 and 1.0 between ranks 18/19 (1-based), so the top
/// cluster is arms 1..18.
Instance build_two_gap_instance();

/// K arms listed in ascending mean. Every adjacent gap is `min_gap` except the
/// one below rank floor(K/2) (1-based), which is `max_gap`.
Instance build_one_gap_instance(std::size_t arms, double min_gap, double max_gap, double sigma = 1.0);

/// Four unit-variance arms with means (2nu+2eps, nu+2eps, eps, 0) for arms
/// 1..4. Requires nu > 2 eps > 0.
Instance build_lower_bound_instance(double nu, double eps);

/// The lower-bound instance with the bottom arm moved to 2.1 eps, which moves
/// the largest gap to the top pair.
Instance build_lower_bound_alternative(double nu, double eps);

/// 90 arms with sigma 0.05, arm i holding rank i. Largest gap 0.029 between
/// ranks 2/3, second largest 0.024 between ranks 45/46, other gaps 0.006.
Instance build_streetview_like_instance();

/// One decimal real per line, ordered by arm index; blank lines are ignored.
Instance load_means_file(const std::filesystem::path& path, double sigma);

}  // namespace maxgap
