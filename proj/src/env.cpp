#include "maxgap/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace maxgap {

namespace {

std::vector<std::size_t> descending_order(std::span<const ArmSpec> arms) {
  std::vector<std::size_t> order(arms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (arms[a].mean != arms[b].mean) return arms[a].mean > arms[b].mean;
    return a < b;
  });
  return order;
}

TrueGaps compute_truth(std::span<const ArmSpec> arms, std::span<const std::size_t> order) {
  const std::size_t k = arms.size();
  TrueGaps truth;
  truth.rank_gap.resize(k - 1);
  for (std::size_t r = 0; r + 1 < k; ++r) {
    truth.rank_gap[r] = arms[order[r]].mean - arms[order[r + 1]].mean;
  }

  std::size_t best = 0;
  bool tied = false;
  for (std::size_t r = 1; r + 1 < k; ++r) {
    if (truth.rank_gap[r] > truth.rank_gap[best]) {
      best = r;
      tied = false;
    } else if (truth.rank_gap[r] == truth.rank_gap[best]) {
      tied = true;
    }
  }
  if (tied) throw InstanceError("largest adjacent gap is not unique");

  truth.max_gap = truth.rank_gap[best];
  truth.split = best + 1;

  truth.arm_gap.assign(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    // Sentinels: the missing side of an extreme arm never wins the max.
    const double above = r == 0 ? -std::numeric_limits<double>::infinity() : truth.rank_gap[r - 1];
    const double below = r + 1 == k ? -std::numeric_limits<double>::infinity() : truth.rank_gap[r];
    truth.arm_gap[order[r]] = std::max(above, below);
  }

  truth.top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(truth.split));
  truth.bottom.assign(order.begin() + static_cast<std::ptrdiff_t>(truth.split), order.end());
  std::sort(truth.top.begin(), truth.top.end());
  std::sort(truth.bottom.begin(), truth.bottom.end());
  return truth;
}

}  // namespace

Instance::Instance(std::vector<ArmSpec> arms) : arms_(std::move(arms)) {
  if (arms_.size() < 3) throw InstanceError("an instance needs at least 3 arms");
  for (const ArmSpec& a : arms_) {
    if (!std::isfinite(a.mean)) throw InstanceError("arm mean must be finite");
    if (!(a.sigma >= 0.0) || !std::isfinite(a.sigma)) throw InstanceError("arm sigma must be finite and >= 0");
  }
  order_ = descending_order(arms_);
  rank_.resize(arms_.size());
  for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = r;
  truth_ = compute_truth(arms_, order_);
  in_top_.assign(arms_.size(), false);
  for (std::size_t a : truth_.top) in_top_[a] = true;
}

std::vector<double> Instance::means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const ArmSpec& a : arms_) out.push_back(a.mean);
  return out;
}

double sample(const Instance& instance, std::size_t arm, RngStream& rng) {
  const ArmSpec& spec = instance.arm(arm);
  return spec.mean + spec.sigma * rng.standard_normal();
}

TrueGaps true_gaps(const Instance& instance) { return instance.truth(); }

Instance instance_from_means(std::span<const double> means, double sigma) {
  std::vector<ArmSpec> arms;
  arms.reserve(means.size());
  for (double m : means) arms.push_back({m, sigma});
  return Instance(std::move(arms));
}

namespace {

// Means for arms listed top-down, built bottom-up from the gaps below each rank.
std::vector<double> means_from_rank_gaps(std::span<const double> rank_gaps, double bottom) {
  std::vector<double> means(rank_gaps.size() + 1);
  means.back() = bottom;
  for (std::size_t r = rank_gaps.size(); r-- > 0;) means[r] = means[r + 1] + rank_gaps[r];
  return means;
}

}  // namespace

Instance build_two_gap_instance() {
  std::vector<double> gaps(23, 0.2);
  gaps[8] = 0.98;   // between ranks 9 and 10
  gaps[17] = 1.0;   // between ranks 18 and 19
  return instance_from_means(means_from_rank_gaps(gaps, 0.0), 1.0);
}

Instance build_one_gap_instance(std::size_t arms, double min_gap, double max_gap, double sigma) {
  if (arms < 3) throw InstanceError("one-gap instance needs at least 3 arms");
  if (!(min_gap < max_gap)) throw InstanceError("one-gap instance needs min_gap < max_gap");
  if (!(min_gap > 0.0)) throw InstanceError("one-gap instance needs min_gap > 0");
  std::vector<double> gaps(arms - 1, min_gap);
  gaps[arms / 2 - 1] = max_gap;
  std::vector<double> means = means_from_rank_gaps(gaps, 0.0);
  std::reverse(means.begin(), means.end());
  return instance_from_means(means, sigma);
}

Instance build_lower_bound_instance(double nu, double eps) {
  if (!(eps > 0.0) || !(nu > 2.0 * eps)) throw InstanceError("lower-bound instance needs nu > 2 eps > 0");
  const std::vector<double> means{2.0 * nu + 2.0 * eps, nu + 2.0 * eps, eps, 0.0};
  return instance_from_means(means, 1.0);
}

Instance build_lower_bound_alternative(double nu, double eps) {
  if (!(eps > 0.0) || !(nu > 2.0 * eps)) throw InstanceError("lower-bound instance needs nu > 2 eps > 0");
  const std::vector<double> means{2.0 * nu + 2.0 * eps, nu + 2.0 * eps, eps, 2.1 * eps};
  return instance_from_means(means, 1.0);
}

Instance build_streetview_like_instance() {
  std::vector<double> gaps(89, 0.006);
  gaps[1] = 0.029;
  gaps[44] = 0.024;
  return instance_from_means(means_from_rank_gaps(gaps, 0.25), 0.05);
}

Instance load_means_file(const std::filesystem::path& path, double sigma) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open means file: " + path.string());
  std::vector<double> means;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream fields(line.substr(first));
    double value = 0.0;
    std::string rest;
    if (!(fields >> value) || (fields >> rest)) {
      throw InstanceError(path.string() + ":" + std::to_string(line_no) + ": expected one real number");
    }
    means.push_back(value);
  }
  if (means.empty()) throw InstanceError("means file is empty: " + path.string());
  return instance_from_means(means, sigma);
}

}  // namespace maxgap
