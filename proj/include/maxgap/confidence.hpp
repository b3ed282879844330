#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "maxgap/env.hpp"

namespace maxgap {

struct ArmStats {
  std::uint64_t count = 0;
  double sum = 0.0;
  double running_mean = 0.0;  // m += (x - m) / n, exact for constant samples

  void add(double x) {
    ++count;
    sum += x;
    running_mean += (x - running_mean) / static_cast<double>(count);
  }
  /// Only meaningful once count >= 1.
  double mean() const { return running_mean; }
};

/// Raw interval [lower, upper] from the latest count, plus the running
/// envelope (max of lowers, min of uppers) that the algorithms consume.
struct IntervalState {
  double lower = 0.0;
  double upper = 0.0;
  double lower_env = 0.0;
  double upper_env = 0.0;
};

struct ArmEstimate {
  ArmStats stats;
  IntervalState interval;
};

struct ConfidenceParams {
  std::size_t arms = 0;  // K
  double delta = 0.1;
};

/// sigma * sqrt(log(4 K s^2 / delta) / s). Throws std::invalid_argument for
/// s == 0, delta outside (0,1), K < 2 or negative sigma.
double radius(std::uint64_t count, std::size_t arms, double delta, double sigma);

/// Folds one sample into the estimate and refreshes both interval forms.
///
/// If the envelope would become empty (only possible once some interval has
/// already missed the mean) it collapses to the empirical mean clamped into
/// the previous envelope, so it stays nested in every earlier interval.
ArmEstimate update(ArmEstimate estimate, double sample, const ConfidenceParams& params, double sigma);

/// True iff every arm's true mean lies in its raw interval. Throws
/// std::invalid_argument if some arm has not been sampled.
bool good_event_holds(const Instance& instance, std::span<const ArmEstimate> estimates);

}  // namespace maxgap
