#include "maxgap/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxgap {

double radius(std::uint64_t count, std::size_t arms, double delta, double sigma) {
  if (count == 0) throw std::invalid_argument("confidence radius is undefined before the first sample");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (arms < 2) throw std::invalid_argument("radius needs at least two arms");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  const double s = static_cast<double>(count);
  return sigma * std::sqrt(std::log(4.0 * static_cast<double>(arms) * s * s / delta) / s);
}

ArmEstimate update(ArmEstimate estimate, double sample, const ConfidenceParams& params, double sigma) {
  const bool first = estimate.stats.count == 0;
  estimate.stats.add(sample);

  const double mean = estimate.stats.mean();
  const double c = radius(estimate.stats.count, params.arms, params.delta, sigma);
  IntervalState& iv = estimate.interval;
  iv.lower = mean - c;
  iv.upper = mean + c;
  if (first) {
    iv.lower_env = iv.lower;
    iv.upper_env = iv.upper;
    return estimate;
  }

  const double lower_env = std::max(iv.lower_env, iv.lower);
  const double upper_env = std::min(iv.upper_env, iv.upper);
  if (lower_env <= upper_env) {
    iv.lower_env = lower_env;
    iv.upper_env = upper_env;
  } else {
    const double point = std::clamp(mean, iv.lower_env, iv.upper_env);
    iv.lower_env = point;
    iv.upper_env = point;
  }
  return estimate;
}

bool good_event_holds(const Instance& instance, std::span<const ArmEstimate> estimates) {
  if (estimates.size() != instance.size()) throw std::invalid_argument("estimate count does not match instance");
  bool holds = true;
  for (std::size_t a = 0; a < estimates.size(); ++a) {
    if (estimates[a].stats.count == 0) throw std::invalid_argument("good event needs every arm sampled");
    const double mu = instance.arm(a).mean;
    holds = holds && estimates[a].interval.lower <= mu && mu <= estimates[a].interval.upper;
  }
  return holds;
}

}  // namespace maxgap
