#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "maxgap/env.hpp"

namespace maxgap {

/// Raised when a hardness parameter of a non-optimal arm is not positive.
class DegenerateInstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One per-arm hardness quantity split by side. `value` is min(right, left),
/// except for the optimal pair (m), (m+1), which carries +inf.
struct SidedHardness {
  std::vector<double> right;
  std::vector<double> left;
  std::vector<double> value;
};

/// Adaptive hardness: for each side, the best helper arm j within the max
/// gap, scored min{d, max_gap - d} with d the mean distance to j. An empty
/// side is +inf.
SidedHardness gamma(const Instance& instance);

/// Refined elimination hardness with the 1/4, 1/8 scalings and the extreme
/// arm terms (max_gap - (mu_(1) - mu_a)) / 8 and (max_gap - (mu_a - mu_(K))) / 8.
SidedHardness rho(const Instance& instance);

/// Sort-then-search hardness: min{d, max_gap - d} with d the distance to the
/// adjacent arm on that side.
SidedHardness naive_gamma(const Instance& instance);

struct HardnessReport {
  SidedHardness gamma;
  SidedHardness rho;
  SidedHardness naive;
  std::vector<bool> optimal;  // arms (m) and (m+1)
};

HardnessReport analyze_hardness(const Instance& instance);

struct PredictedComplexity {
  double main = 0.0;  // alpha * sum log(K/(delta gamma)) / gamma^2
  double elim = 0.0;  // same with rho
  double ucb = 0.0;   // 6 alpha * sum log(K/(delta gamma)) / gamma^2
};

/// Sums over non-optimal arms; infinite entries contribute 0. Throws
/// DegenerateInstanceError on a nonpositive gamma or rho of a non-optimal arm.
PredictedComplexity predicted_complexity(const HardnessReport& report, double delta, double alpha = 1.0);

}  // namespace maxgap
