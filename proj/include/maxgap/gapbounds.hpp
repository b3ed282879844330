#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxgap/confidence.hpp"
#include "maxgap/kernels.hpp"

namespace maxgap {

/// Per-arm mean intervals at one time step, stored as parallel arrays.
struct IntervalSnapshot {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }

  /// Envelope intervals by default; raw intervals when `envelope` is false.
  static IntervalSnapshot from_estimates(std::span<const ArmEstimate> estimates, bool envelope = true);
};

/// Largest right gap of `arm` if its mean sat exactly at x:
/// min{upper_j : lower_j > x} - x, or max_{j != arm} upper_j - x when no
/// lower bound exceeds x. May be negative.
double right_anchor_gap(std::size_t arm, double x, const IntervalSnapshot& snapshot);

/// Mirror of right_anchor_gap: x - max{lower_j : upper_j < x}, or
/// x - min_{j != arm} lower_j when no upper bound is below x.
double left_anchor_gap(std::size_t arm, double x, const IntervalSnapshot& snapshot);

struct UpperGap {
  double right = 0.0;
  double left = 0.0;
  double value = 0.0;               // max(right, left)
  std::size_t right_anchor = 0;     // arm whose lower bound places `arm` for the right bound
  std::size_t left_anchor = 0;      // arm whose upper bound places `arm` for the left bound
};

/// Gap upper confidence bound of one arm, evaluated directly from the anchor
/// functions over the pertinent endpoints inside the arm's own interval.
/// O(K^2) per arm; the reference route for GapBoundEngine.
UpperGap upper_gap(std::size_t arm, const IntervalSnapshot& snapshot);

struct LowerGap {
  double value = 0.0;
  std::size_t split = 0;  // size of the separated top group, in [1, K-1]
};

/// Lower confidence bound on the largest gap: the best split of the arms,
/// ranked by empirical mean (ties by lower index), measured as the smallest
/// lower bound above the split minus the largest upper bound below it.
LowerGap lower_max_gap(const IntervalSnapshot& snapshot, std::span<const double> empirical_means);

/// Same, for a precomputed descending order of arms.
LowerGap lower_max_gap_ordered(const IntervalSnapshot& snapshot, std::span<const std::size_t> order);

/// Arms ranked by descending empirical mean, ties broken by lower index.
std::vector<std::size_t> empirical_order(std::span<const double> empirical_means);

struct SidedGap {
  double right = 0.0;
  double left = 0.0;
};

inline constexpr std::size_t kBruteForceMaxArms = 8;

/// Exhaustive oracle for upper_gap: maximizes the right (left) neighbour
/// distance of `arm` over mean placements inside the intervals, with every
/// placement drawn from the arm's own endpoints plus all other endpoints
/// that fall inside its interval. Throws std::invalid_argument above
/// kBruteForceMaxArms arms.
SidedGap brute_force_upper_gap(std::size_t arm, const IntervalSnapshot& snapshot);

struct GapBounds {
  std::vector<double> right;
  std::vector<double> left;
  std::vector<double> value;
};

/// Whole-vector gap upper bounds in O(K^2) through the SIMD kernels.
///
/// For every endpoint it first finds the nearest forced neighbour
/// (min upper among arms whose lower bound lies above the endpoint, and the
/// mirror image), then scans each arm's pertinent endpoints. Neighbour
/// lookups are done lazily, so bounding a few arms with narrow intervals
/// costs far less than the full vector.
class GapBoundEngine {
 public:
  explicit GapBoundEngine(const kernels::KernelTable& kernels = kernels::active()) : kernels_(&kernels) {}

  void compute(const IntervalSnapshot& snapshot, GapBounds& out);

  /// Bounds only for `arms`; other entries of `out` are set to NaN.
  void compute(const IntervalSnapshot& snapshot, std::span<const std::size_t> arms, GapBounds& out);
  /// Exact bounds for every arm that can hold one of the `depth` largest
  /// distinct values; other entries are NaN. An arm is skipped only when a
  /// cheap ceiling (nearest forced neighbour beyond its whole interval) is
  /// already below that value, so the top sets match compute() exactly.
  void compute_leaders(const IntervalSnapshot& snapshot, std::size_t depth, GapBounds& out);

 private:
  void prepare(const IntervalSnapshot& snapshot, GapBounds& out);
  void bound_arm(const IntervalSnapshot& snapshot, std::size_t arm, GapBounds& out);
  void sweep_tables(const IntervalSnapshot& snapshot);

  const kernels::KernelTable* kernels_;
  std::vector<double> above_;  // above_[j] = min{upper_k : lower_k > lower_j}
  std::vector<double> below_;  // below_[j] = max{lower_k : upper_k < upper_j}
  std::vector<unsigned char> above_ready_;
  std::vector<unsigned char> below_ready_;
  bool tables_full_ = false;
  std::vector<std::size_t> by_lower_, by_upper_, by_ceiling_;
  std::vector<double> suffix_min_upper_, prefix_max_lower_, ceiling_;
  double upper_max_ = 0.0, upper_second_ = 0.0;
  double lower_min_ = 0.0, lower_second_ = 0.0;
  std::size_t upper_argmax_ = 0, lower_argmin_ = 0;
};

GapBounds upper_gaps(const IntervalSnapshot& snapshot);

/// Indices attaining the maximum of `values` (exact comparison).
std::vector<std::size_t> argmax_set(std::span<const double> values);

}  // namespace maxgap
