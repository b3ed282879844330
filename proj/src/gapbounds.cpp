#include "maxgap/gapbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace maxgap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

IntervalSnapshot IntervalSnapshot::from_estimates(std::span<const ArmEstimate> estimates, bool envelope) {
  IntervalSnapshot s;
  s.lower.reserve(estimates.size());
  s.upper.reserve(estimates.size());
  for (const ArmEstimate& e : estimates) {
    s.lower.push_back(envelope ? e.interval.lower_env : e.interval.lower);
    s.upper.push_back(envelope ? e.interval.upper_env : e.interval.upper);
  }
  return s;
}

double right_anchor_gap(std::size_t arm, double x, const IntervalSnapshot& snapshot) {
  double nearest = kInf;
  double widest = -kInf;
  for (std::size_t j = 0; j < snapshot.size(); ++j) {
    if (snapshot.lower[j] > x) nearest = std::min(nearest, snapshot.upper[j]);
    if (j != arm) widest = std::max(widest, snapshot.upper[j]);
  }
  return (nearest != kInf ? nearest : widest) - x;
}

double left_anchor_gap(std::size_t arm, double x, const IntervalSnapshot& snapshot) {
  double nearest = -kInf;
  double widest = kInf;
  for (std::size_t j = 0; j < snapshot.size(); ++j) {
    if (snapshot.upper[j] < x) nearest = std::max(nearest, snapshot.lower[j]);
    if (j != arm) widest = std::min(widest, snapshot.lower[j]);
  }
  return x - (nearest != -kInf ? nearest : widest);
}

UpperGap upper_gap(std::size_t arm, const IntervalSnapshot& snapshot) {
  if (arm >= snapshot.size()) throw std::out_of_range("arm index out of range");
  const double lo = snapshot.lower[arm];
  const double hi = snapshot.upper[arm];
  UpperGap g;
  g.right = -kInf;
  g.left = -kInf;
  g.right_anchor = arm;
  g.left_anchor = arm;
  for (std::size_t j = 0; j < snapshot.size(); ++j) {
    const double l = snapshot.lower[j];
    if (l >= lo && l <= hi) {
      const double v = right_anchor_gap(arm, l, snapshot);
      if (v > g.right) {
        g.right = v;
        g.right_anchor = j;
      }
    }
    const double r = snapshot.upper[j];
    if (r >= lo && r <= hi) {
      const double v = left_anchor_gap(arm, r, snapshot);
      if (v > g.left) {
        g.left = v;
        g.left_anchor = j;
      }
    }
  }
  g.value = std::max(g.right, g.left);
  return g;
}

std::vector<std::size_t> empirical_order(std::span<const double> empirical_means) {
  std::vector<std::size_t> order(empirical_means.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (empirical_means[a] != empirical_means[b]) return empirical_means[a] > empirical_means[b];
    return a < b;
  });
  return order;
}

LowerGap lower_max_gap_ordered(const IntervalSnapshot& snapshot, std::span<const std::size_t> order) {
  const std::size_t k = order.size();
  if (k < 2 || k != snapshot.size()) throw std::invalid_argument("lower_max_gap needs a full order of >= 2 arms");
  // Suffix maxima of upper bounds below each split.
  thread_local std::vector<double> suffix;
  suffix.resize(k);
  suffix[k - 1] = snapshot.upper[order[k - 1]];
  for (std::size_t r = k - 1; r-- > 0;) suffix[r] = std::max(suffix[r + 1], snapshot.upper[order[r]]);

  LowerGap best{-kInf, 1};
  double prefix_min = kInf;
  for (std::size_t r = 0; r + 1 < k; ++r) {
    prefix_min = std::min(prefix_min, snapshot.lower[order[r]]);
    const double v = prefix_min - suffix[r + 1];
    if (v > best.value) best = {v, r + 1};
  }
  return best;
}

LowerGap lower_max_gap(const IntervalSnapshot& snapshot, std::span<const double> empirical_means) {
  if (empirical_means.size() != snapshot.size()) throw std::invalid_argument("means and snapshot differ in size");
  const std::vector<std::size_t> order = empirical_order(empirical_means);
  return lower_max_gap_ordered(snapshot, order);
}

namespace {

std::vector<double> placements(std::size_t arm, const IntervalSnapshot& s) {
  const double lo = s.lower[arm];
  const double hi = s.upper[arm];
  std::vector<double> out{lo, hi};
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j == arm) continue;
    for (double e : {s.lower[j], s.upper[j]}) {
      if (e >= lo && e <= hi) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Every arm other than the pair must admit a placement outside the open
// interval (from, to). The constraint is separable across arms, so checking
// each arm's candidate list on its own covers the full product.
bool others_fit(std::size_t a, std::size_t b, double from, double to, const std::vector<std::vector<double>>& cand) {
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (i == a || i == b) continue;
    const bool fits = std::any_of(cand[i].begin(), cand[i].end(), [&](double v) { return !(from < v && v < to); });
    if (!fits) return false;
  }
  return true;
}

}  // namespace

SidedGap brute_force_upper_gap(std::size_t arm, const IntervalSnapshot& snapshot) {
  const std::size_t k = snapshot.size();
  if (k > kBruteForceMaxArms) throw std::invalid_argument("brute-force gap bound is limited to 8 arms");
  if (arm >= k) throw std::out_of_range("arm index out of range");
  std::vector<std::vector<double>> cand(k);
  for (std::size_t i = 0; i < k; ++i) cand[i] = placements(i, snapshot);

  SidedGap best{-kInf, -kInf};
  for (std::size_t b = 0; b < k; ++b) {
    if (b == arm) continue;
    for (double xa : cand[arm]) {
      for (double xb : cand[b]) {
        // b as right neighbour: nothing strictly between xa and xb.
        if (xb - xa > best.right && others_fit(arm, b, xa, xb, cand)) best.right = xb - xa;
        // b as left neighbour.
        if (xa - xb > best.left && others_fit(arm, b, xb, xa, cand)) best.left = xa - xb;
      }
    }
  }
  return best;
}

namespace {

// Nearly sorted between rounds, so insertion sort is close to linear.
template <typename Key>
void resort(std::vector<std::size_t>& idx, std::size_t k, Key key) {
  if (idx.size() != k) {
    idx.resize(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
  }
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t v = idx[i];
    std::size_t j = i;
    while (j > 0 && key(v) < key(idx[j - 1])) {
      idx[j] = idx[j - 1];
      --j;
    }
    idx[j] = v;
  }
}

}  // namespace

void GapBoundEngine::prepare(const IntervalSnapshot& snapshot, GapBounds& out) {
  const std::size_t k = snapshot.size();
  if (k < 2) throw std::invalid_argument("gap bounds need at least two arms");
  above_.assign(k, kInf);
  below_.assign(k, -kInf);
  above_ready_.assign(k, 0);
  below_ready_.assign(k, 0);
  out.right.assign(k, kNaN);
  out.left.assign(k, kNaN);
  out.value.assign(k, kNaN);
  tables_full_ = false;

  upper_argmax_ = 0;
  lower_argmin_ = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (snapshot.upper[j] > snapshot.upper[upper_argmax_]) upper_argmax_ = j;
    if (snapshot.lower[j] < snapshot.lower[lower_argmin_]) lower_argmin_ = j;
  }
  upper_max_ = snapshot.upper[upper_argmax_];
  lower_min_ = snapshot.lower[lower_argmin_];
  upper_second_ = -kInf;
  lower_second_ = kInf;
  for (std::size_t j = 0; j < k; ++j) {
    if (j != upper_argmax_) upper_second_ = std::max(upper_second_, snapshot.upper[j]);
    if (j != lower_argmin_) lower_second_ = std::min(lower_second_, snapshot.lower[j]);
  }
}

void GapBoundEngine::bound_arm(const IntervalSnapshot& snapshot, std::size_t a, GapBounds& out) {
  const std::size_t k = snapshot.size();
  const double* lower = snapshot.lower.data();
  const double* upper = snapshot.upper.data();
  const double lo = lower[a];
  const double hi = upper[a];
  if (!tables_full_) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!above_ready_[j] && lower[j] >= lo && lower[j] <= hi) {
        above_[j] = kernels_->min_where_key_above(lower, upper, k, lower[j]);
        above_ready_[j] = 1;
      }
      if (!below_ready_[j] && upper[j] >= lo && upper[j] <= hi) {
        below_[j] = kernels_->max_where_key_below(upper, lower, k, upper[j]);
        below_ready_[j] = 1;
      }
    }
  }
  const double right_fallback = a == upper_argmax_ ? upper_second_ : upper_max_;
  const double left_fallback = a == lower_argmin_ ? lower_second_ : lower_min_;
  out.right[a] = kernels_->right_gap_scan(lower, above_.data(), k, lo, hi, right_fallback);
  out.left[a] = kernels_->left_gap_scan(upper, below_.data(), k, lo, hi, left_fallback);
  out.value[a] = std::max(out.right[a], out.left[a]);
}

void GapBoundEngine::sweep_tables(const IntervalSnapshot& snapshot) {
  const std::size_t k = snapshot.size();
  const double* lower = snapshot.lower.data();
  const double* upper = snapshot.upper.data();
  resort(by_lower_, k, [&](std::size_t i) { return lower[i]; });
  resort(by_upper_, k, [&](std::size_t i) { return upper[i]; });
  suffix_min_upper_.resize(k + 1);
  prefix_max_lower_.resize(k + 1);
  suffix_min_upper_[k] = kInf;
  for (std::size_t i = k; i-- > 0;) suffix_min_upper_[i] = std::min(suffix_min_upper_[i + 1], upper[by_lower_[i]]);
  prefix_max_lower_[0] = -kInf;
  for (std::size_t i = 0; i < k; ++i) prefix_max_lower_[i + 1] = std::max(prefix_max_lower_[i], lower[by_upper_[i]]);
  // Ties share one table entry: the first position strictly above the group.
  for (std::size_t i = 0; i < k;) {
    std::size_t end = i;
    while (end < k && lower[by_lower_[end]] == lower[by_lower_[i]]) ++end;
    for (std::size_t t = i; t < end; ++t) above_[by_lower_[t]] = suffix_min_upper_[end];
    i = end;
  }
  for (std::size_t i = 0; i < k;) {
    std::size_t end = i;
    while (end < k && upper[by_upper_[end]] == upper[by_upper_[i]]) ++end;
    for (std::size_t t = i; t < end; ++t) below_[by_upper_[t]] = prefix_max_lower_[i];
    i = end;
  }
  tables_full_ = true;
}

void GapBoundEngine::compute(const IntervalSnapshot& snapshot, GapBounds& out) {
  prepare(snapshot, out);
  sweep_tables(snapshot);
  for (std::size_t a = 0; a < snapshot.size(); ++a) bound_arm(snapshot, a, out);
}

void GapBoundEngine::compute(const IntervalSnapshot& snapshot, std::span<const std::size_t> arms, GapBounds& out) {
  prepare(snapshot, out);
  for (std::size_t a : arms) {
    if (a >= snapshot.size()) throw std::out_of_range("arm index out of range");
    bound_arm(snapshot, a, out);
  }
}

void GapBoundEngine::compute_leaders(const IntervalSnapshot& snapshot, std::size_t depth, GapBounds& out) {
  prepare(snapshot, out);
  const std::size_t k = snapshot.size();
  const double* lower = snapshot.lower.data();
  const double* upper = snapshot.upper.data();
  sweep_tables(snapshot);

  ceiling_.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto above = std::upper_bound(by_lower_.begin(), by_lower_.end(), upper[a],
                                        [&](double x, std::size_t i) { return x < lower[i]; });
    const double nearest_up = suffix_min_upper_[static_cast<std::size_t>(above - by_lower_.begin())];
    const double right = (nearest_up != kInf ? nearest_up : (a == upper_argmax_ ? upper_second_ : upper_max_)) - lower[a];
    const auto below = std::lower_bound(by_upper_.begin(), by_upper_.end(), lower[a],
                                        [&](std::size_t i, double x) { return upper[i] < x; });
    const double nearest_down = prefix_max_lower_[static_cast<std::size_t>(below - by_upper_.begin())];
    const double left = upper[a] - (nearest_down != -kInf ? nearest_down : (a == lower_argmin_ ? lower_second_ : lower_min_));
    ceiling_[a] = std::max(right, left);
  }

  // Evaluate in descending ceiling order until no ceiling reaches the
  // depth-th distinct value found so far.
  double found[2] = {-kInf, -kInf};
  std::size_t distinct = 0;
  depth = std::clamp<std::size_t>(depth, 1, 2);
  resort(by_ceiling_, k, [&](std::size_t i) { return -ceiling_[i]; });
  for (std::size_t next : by_ceiling_) {
    if (distinct >= depth && ceiling_[next] < found[depth - 1]) break;
    bound_arm(snapshot, next, out);
    const double v = out.value[next];
    if (distinct == 0 || v > found[0]) {
      if (distinct > 0 && depth == 2) found[1] = found[0];
      found[0] = v;
      distinct = std::min<std::size_t>(distinct + 1, 2);
      if (depth == 1) distinct = 1;
    } else if (v < found[0] && depth == 2 && (distinct < 2 || v > found[1])) {
      found[1] = v;
      distinct = 2;
    }
  }
}

GapBounds upper_gaps(const IntervalSnapshot& snapshot) {
  GapBoundEngine engine;
  GapBounds out;
  engine.compute(snapshot, out);
  return out;
}

std::vector<std::size_t> argmax_set(std::span<const double> values) {
  std::vector<std::size_t> out;
  if (values.empty()) return out;
  const double best = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) out.push_back(i);
  }
  return out;
}

}  // namespace maxgap
