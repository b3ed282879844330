#include "maxgap/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace maxgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SidedHardness blank(std::size_t k) {
  return SidedHardness{std::vector<double>(k, kInf), std::vector<double>(k, kInf), std::vector<double>(k, kInf)};
}

void combine(const Instance& instance, SidedHardness& h) {
  for (std::size_t a = 0; a < instance.size(); ++a) h.value[a] = std::min(h.right[a], h.left[a]);
  const TrueGaps& t = instance.truth();
  h.value[instance.order()[t.split - 1]] = kInf;
  h.value[instance.order()[t.split]] = kInf;
}

}  // namespace

SidedHardness gamma(const Instance& instance) {
  const std::size_t k = instance.size();
  const double max_gap = instance.truth().max_gap;
  SidedHardness h = blank(k);
  for (std::size_t a = 0; a < k; ++a) {
    double right = -kInf, left = -kInf;
    for (std::size_t j = 0; j < k; ++j) {
      const double up = instance.arm(j).mean - instance.arm(a).mean;
      if (up > 0 && up < max_gap) right = std::max(right, std::min(up, max_gap - up));
      const double down = -up;
      if (down > 0 && down < max_gap) left = std::max(left, std::min(down, max_gap - down));
    }
    if (right != -kInf) h.right[a] = right;
    if (left != -kInf) h.left[a] = left;
  }
  combine(instance, h);
  return h;
}

SidedHardness rho(const Instance& instance) {
  const std::size_t k = instance.size();
  const double max_gap = instance.truth().max_gap;
  const double top = instance.arm(instance.order().front()).mean;
  const double bottom = instance.arm(instance.order().back()).mean;
  SidedHardness h = blank(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double mu = instance.arm(a).mean;
    double right = -kInf, left = -kInf;
    for (std::size_t j = 0; j < k; ++j) {
      const double up = instance.arm(j).mean - mu;
      if (up > 0) right = std::max(right, std::min(up / 4, (max_gap - up) / 8));
      const double down = -up;
      if (down > 0) left = std::max(left, std::min(down / 4, (max_gap - down) / 8));
    }
    // empty inner domain stays +inf
    h.right[a] = right == -kInf ? kInf : std::max(right, (max_gap - (top - mu)) / 8);
    h.left[a] = left == -kInf ? kInf : std::max(left, (max_gap - (mu - bottom)) / 8);
  }
  combine(instance, h);
  return h;
}

SidedHardness naive_gamma(const Instance& instance) {
  const std::size_t k = instance.size();
  const double max_gap = instance.truth().max_gap;
  SidedHardness h = blank(k);
  for (std::size_t a = 0; a < k; ++a) {
    double up = kInf, down = kInf;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = instance.arm(j).mean - instance.arm(a).mean;
      if (d > 0) up = std::min(up, d);
      if (d < 0) down = std::min(down, -d);
    }
    if (up != kInf) h.right[a] = std::min(up, max_gap - up);
    if (down != kInf) h.left[a] = std::min(down, max_gap - down);
  }
  combine(instance, h);
  return h;
}

HardnessReport analyze_hardness(const Instance& instance) {
  HardnessReport r{gamma(instance), rho(instance), naive_gamma(instance), std::vector<bool>(instance.size(), false)};
  const std::size_t split = instance.truth().split;
  r.optimal[instance.order()[split - 1]] = true;
  r.optimal[instance.order()[split]] = true;
  return r;
}

PredictedComplexity predicted_complexity(const HardnessReport& report, double delta, double alpha) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const double k = static_cast<double>(report.optimal.size());
  auto term = [&](double h, const char* name) {
    if (!(h > 0.0)) throw DegenerateInstanceError(std::string("nonpositive ") + name + " for a non-optimal arm");
    if (std::isinf(h)) return 0.0;
    return std::log(k / (delta * h)) / (h * h);
  };
  PredictedComplexity p;
  for (std::size_t a = 0; a < report.optimal.size(); ++a) {
    if (report.optimal[a]) continue;
    p.main += term(report.gamma.value[a], "gamma");
    p.elim += term(report.rho.value[a], "rho");
  }
  p.main *= alpha;
  p.elim *= alpha;
  p.ucb = 6.0 * p.main;
  return p;
}

}  // namespace maxgap
