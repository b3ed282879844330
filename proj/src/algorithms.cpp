#include "maxgap/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "maxgap/confidence.hpp"
#include "maxgap/csv.hpp"
#include "maxgap/gapbounds.hpp"

namespace maxgap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::elimination:
      return "maxgap-elim";
    case Algorithm::ucb:
      return "maxgap-ucb";
    case Algorithm::top2_ucb:
      return "maxgap-top2ucb";
    case Algorithm::uniform:
      return "uniform";
    case Algorithm::naive:
      return "naive";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::elimination, Algorithm::ucb, Algorithm::top2_ucb, Algorithm::uniform,
                      Algorithm::naive}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged:
      return "converged";
    case StopReason::early_stop_rule:
      return "early-stop-rule";
    case StopReason::budget_exhausted:
      return "budget-exhausted";
  }
  return "unknown";
}

namespace {

Clustering clusters_from_top(std::vector<std::size_t> top, std::size_t arms) {
  Clustering c;
  std::sort(top.begin(), top.end());
  std::vector<bool> is_top(arms, false);
  for (std::size_t a : top) is_top[a] = true;
  for (std::size_t a = 0; a < arms; ++a) {
    if (!is_top[a]) c.bottom.push_back(a);
  }
  c.top = std::move(top);
  return c;
}

bool order_before(std::span<const double> means, std::size_t a, std::size_t b) {
  if (means[a] != means[b]) return means[a] > means[b];
  return a < b;
}

}  // namespace

Clustering report_clusters(std::span<const double> empirical_means) {
  const std::size_t k = empirical_means.size();
  if (k < 2) throw std::invalid_argument("clustering needs at least two arms");
  const std::vector<std::size_t> order = empirical_order(empirical_means);
  std::size_t split = 1;
  double best = empirical_means[order[0]] - empirical_means[order[1]];
  for (std::size_t r = 1; r + 1 < k; ++r) {
    const double g = empirical_means[order[r]] - empirical_means[order[r + 1]];
    if (g > best) {
      best = g;
      split = r + 1;
    }
  }
  return clusters_from_top({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(split)}, k);
}

Clustering true_clusters(const Instance& instance) {
  return Clustering{instance.truth().top, instance.truth().bottom};
}

namespace {

// Shared bookkeeping for one run: sampling, intervals, checkpoints, trace.
class Runner {
 public:
  Runner(Algorithm algorithm, const Instance& instance, const RunConfig& config, RngStream& rng)
      : instance_(instance), config_(config), rng_(rng), params_{instance.size(), config.delta} {
    if (!std::is_sorted(config.checkpoints.begin(), config.checkpoints.end()) ||
        std::adjacent_find(config.checkpoints.begin(), config.checkpoints.end()) != config.checkpoints.end()) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
    if (config.budget_cap < instance.size()) throw std::invalid_argument("budget_cap must be at least K");
    const std::size_t k = instance.size();
    trace_.algorithm = algorithm;
    estimates_.resize(k);
    means_.assign(k, 0.0);
    snapshot_.lower.assign(k, 0.0);
    snapshot_.upper.assign(k, 0.0);
    order_.resize(k);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    trace_.counts.assign(k, 0);
    round_ = 1;
  }

  std::size_t arms() const { return instance_.size(); }
  std::uint64_t round() const { return round_; }
  std::uint64_t total() const { return total_; }
  const IntervalSnapshot& snapshot() const { return snapshot_; }
  std::span<const double> means() const { return means_; }
  std::span<const std::uint64_t> counts() const { return trace_.counts; }
  const ArmEstimate& estimate(std::size_t a) const { return estimates_[a]; }
  bool budget_exhausted() const { return total_ >= config_.budget_cap; }
  RunTrace& trace() { return trace_; }

  double draw(std::size_t a) {
    const double x = sample(instance_, a, rng_);
    estimates_[a] = update(estimates_[a], x, params_, instance_.arm(a).sigma);
    const ArmEstimate& e = estimates_[a];
    means_[a] = e.stats.mean();
    snapshot_.lower[a] = e.interval.lower_env;
    snapshot_.upper[a] = e.interval.upper_env;
    trace_.counts[a] = e.stats.count;
    ++total_;
    order_dirty_ = true;
    const double mu = instance_.arm(a).mean;
    if (!(e.interval.lower <= mu && mu <= e.interval.upper)) {
      round_good_ = false;
      if (trace_.good_event) {
        trace_.good_event = false;
        trace_.first_good_event_failure = round_;
      }
    }
    return x;
  }

  /// Descending empirical order, refreshed by insertion sort (rounds only
  /// perturb a few entries).
  std::span<const std::size_t> order() {
    if (order_dirty_) {
      for (std::size_t i = 1; i < order_.size(); ++i) {
        const std::size_t v = order_[i];
        std::size_t j = i;
        while (j > 0 && order_before(means_, v, order_[j - 1])) {
          order_[j] = order_[j - 1];
          --j;
        }
        order_[j] = v;
      }
      order_dirty_ = false;
    }
    return order_;
  }

  RoundRecord* begin_record(std::span<const std::size_t> sampled) {
    if (!config_.record_rounds) return nullptr;
    RoundRecord& r = trace_.rounds.emplace_back();
    r.round = round_;
    r.sampled.assign(sampled.begin(), sampled.end());
    r.counts = trace_.counts;
    r.lower_env = snapshot_.lower;
    r.upper_env = snapshot_.upper;
    r.good_event = round_good_;
    return &r;
  }

  static void store_bounds(RoundRecord* r, const GapBounds& bounds, const LowerGap* lower) {
    if (r == nullptr) return;
    r->gap_upper = bounds.value;
    r->gap_upper_right = bounds.right;
    r->gap_upper_left = bounds.left;
    if (lower != nullptr) {
      r->gap_lower = lower->value;
      r->gap_lower_split = lower->split;
    }
  }

  void end_round() {
    const auto& cps = config_.checkpoints;
    while (next_checkpoint_ < cps.size() && total_ >= cps[next_checkpoint_]) {
      trace_.checkpoints.push_back({cps[next_checkpoint_], total_, false, trace_.counts, report_clusters(means_)});
      ++next_checkpoint_;
    }
    ++round_;
    round_good_ = true;
  }

  RunTrace finish(Clustering clusters, StopReason reason) {
    trace_.stop_round = round_ - 1;
    trace_.total_samples = total_;
    trace_.clusters = std::move(clusters);
    trace_.reason = reason;
    const auto& cps = config_.checkpoints;
    for (; next_checkpoint_ < cps.size(); ++next_checkpoint_) {
      trace_.checkpoints.push_back({cps[next_checkpoint_], total_, true, trace_.counts, trace_.clusters});
    }
    return std::move(trace_);
  }

 private:
  const Instance& instance_;
  const RunConfig& config_;
  RngStream& rng_;
  ConfidenceParams params_;
  std::vector<ArmEstimate> estimates_;
  std::vector<double> means_;
  IntervalSnapshot snapshot_;
  std::vector<std::size_t> order_;
  bool order_dirty_ = true;
  std::uint64_t round_ = 1;
  std::uint64_t total_ = 0;
  std::size_t next_checkpoint_ = 0;
  bool round_good_ = true;
  RunTrace trace_;
};

std::vector<std::size_t> all_arms(std::size_t k) {
  std::vector<std::size_t> v(k);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// Arms at the largest and second largest distinct bound; NaN entries
// (arms the engine skipped) are ignored.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> top_sets(std::span<const double> values) {
  double best = -kInf, second = -kInf;
  for (double v : values) {
    if (std::isnan(v)) continue;
    if (v > best) {
      second = best;
      best = v;
    } else if (v < best && v > second) {
      second = v;
    }
  }
  std::vector<std::size_t> first, next;
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] == best) first.push_back(a);
    if (second != -kInf && values[a] == second) next.push_back(a);
  }
  return {std::move(first), std::move(next)};
}

// Every right bound above the witnessed split and every left bound below it
// is already smaller than the certified gap.
bool split_is_certified(const GapBounds& bounds, std::span<const std::size_t> order, const LowerGap& lower) {
  if (!(lower.value > 0.0)) return false;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t a = order[r];
    const double side = r < lower.split ? bounds.right[a] : bounds.left[a];
    if (!(side < lower.value)) return false;
  }
  return true;
}

}  // namespace

RunTrace max_gap_elim(const Instance& instance, const RunConfig& config, RngStream& rng) {
  Runner run(Algorithm::elimination, instance, config, rng);
  const std::size_t k = instance.size();
  const std::vector<std::size_t> everyone = all_arms(k);
  std::vector<std::size_t> active = everyone;
  run.trace().eliminated_round.assign(k, 0);
  GapBoundEngine engine;
  GapBounds bounds;

  while (true) {
    for (std::size_t a : active) run.draw(a);
    RoundRecord* rec = run.begin_record(active);

    const bool need_all = config.record_rounds || config.elim_early_stop;
    engine.compute(run.snapshot(), need_all ? std::span<const std::size_t>(everyone) : active, bounds);
    const std::span<const std::size_t> order = run.order();
    const LowerGap lower = lower_max_gap_ordered(run.snapshot(), order);

    std::erase_if(active, [&](std::size_t a) {
      if (bounds.value[a] < lower.value) {
        run.trace().eliminated_round[a] = run.round();
        return true;
      }
      return false;
    });
    if (rec != nullptr) {
      Runner::store_bounds(rec, bounds, &lower);
      rec->active = active;
    }

    const bool certified = config.elim_early_stop && split_is_certified(bounds, order, lower);
    std::vector<std::size_t> witnessed_top;
    if (certified) witnessed_top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(lower.split));
    run.end_round();

    if (certified) return run.finish(clusters_from_top(std::move(witnessed_top), k), StopReason::early_stop_rule);
    if (active.size() <= 2) return run.finish(report_clusters(run.means()), StopReason::converged);
    if (run.budget_exhausted()) {
      run.trace().truncated = true;
      return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
    }
  }
}

RunTrace max_gap_ucb(const Instance& instance, const RunConfig& config, RngStream& rng) {
  Runner run(Algorithm::ucb, instance, config, rng);
  const std::size_t k = instance.size();
  std::vector<std::size_t> chosen = all_arms(k);
  GapBoundEngine engine;
  GapBounds bounds;

  while (true) {
    for (std::size_t a : chosen) run.draw(a);
    RoundRecord* rec = run.begin_record(chosen);
    if (config.record_rounds) {
      engine.compute(run.snapshot(), bounds);
    } else {
      engine.compute_leaders(run.snapshot(), 1, bounds);
    }
    chosen = top_sets(bounds.value).first;

    // Some pair of arms dominates the rest of the sample counts.
    std::uint64_t first = 0, second = 0;
    for (std::uint64_t t : run.counts()) {
      if (t > first) {
        second = first;
        first = t;
      } else if (t > second) {
        second = t;
      }
    }
    const double pair = static_cast<double>(first + second);
    const double rest = static_cast<double>(run.total() - first - second);
    const bool stop = pair >= config.ucb_stop_factor * rest;

    if (rec != nullptr) {
      Runner::store_bounds(rec, bounds, nullptr);
      rec->top1 = chosen;
    }
    run.end_round();

    if (stop) return run.finish(report_clusters(run.means()), StopReason::converged);
    if (run.budget_exhausted()) {
      run.trace().truncated = true;
      return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
    }
  }
}

RunTrace max_gap_top2_ucb(const Instance& instance, const RunConfig& config, RngStream& rng) {
  Runner run(Algorithm::top2_ucb, instance, config, rng);
  const std::size_t k = instance.size();
  std::vector<std::size_t> chosen = all_arms(k);
  GapBoundEngine engine;
  GapBounds bounds;

  while (true) {
    for (std::size_t a : chosen) run.draw(a);
    RoundRecord* rec = run.begin_record(chosen);
    if (config.record_rounds) {
      engine.compute(run.snapshot(), bounds);
    } else {
      engine.compute_leaders(run.snapshot(), 2, bounds);
    }

    const auto [top1, top2] = top_sets(bounds.value);
    // all bounds tied: no second value, sample the top set only
    if (top2.empty()) ++run.trace().degenerate_rounds;
    const LowerGap lower = lower_max_gap_ordered(run.snapshot(), run.order());
    const bool stop = !top2.empty() && bounds.value[top2.front()] < lower.value;

    if (rec != nullptr) {
      Runner::store_bounds(rec, bounds, &lower);
      rec->top1 = top1;
      rec->top2 = top2;
    }
    run.end_round();

    if (stop) return run.finish(report_clusters(run.means()), StopReason::converged);
    if (run.budget_exhausted()) {
      run.trace().truncated = true;
      return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
    }
    chosen = top1;
    chosen.insert(chosen.end(), top2.begin(), top2.end());
    std::sort(chosen.begin(), chosen.end());
  }
}

RunTrace uniform_baseline(const Instance& instance, const RunConfig& config, RngStream& rng) {
  Runner run(Algorithm::uniform, instance, config, rng);
  const std::vector<std::size_t> everyone = all_arms(instance.size());
  while (true) {
    for (std::size_t a : everyone) run.draw(a);
    run.begin_record(everyone);
    run.end_round();
    if (run.budget_exhausted()) return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
  }
}

namespace {

bool intervals_disjoint(const IntervalSnapshot& s) {
  std::vector<std::size_t> by_lower = all_arms(s.size());
  std::sort(by_lower.begin(), by_lower.end(), [&](std::size_t a, std::size_t b) {
    if (s.lower[a] != s.lower[b]) return s.lower[a] < s.lower[b];
    return a < b;
  });
  for (std::size_t i = 0; i + 1 < by_lower.size(); ++i) {
    if (!(s.upper[by_lower[i]] < s.lower[by_lower[i + 1]])) return false;
  }
  return true;
}

struct GapArm {
  std::size_t upper_arm = 0;
  std::size_t lower_arm = 0;
  std::uint64_t count = 0;
  double sum = 0.0;
  double noise = 0.0;  // standard deviation of one paired difference

  double mean() const { return sum / static_cast<double>(count); }
};

}  // namespace

RunTrace naive_sort_then_bai(const Instance& instance, const RunConfig& config, RngStream& rng) {
  Runner run(Algorithm::naive, instance, config, rng);
  const std::size_t k = instance.size();
  const std::vector<std::size_t> everyone = all_arms(k);

  // Phase 1: uniform rounds until the intervals certify a full sort.
  while (true) {
    for (std::size_t a : everyone) run.draw(a);
    run.begin_record(everyone);
    run.end_round();
    if (intervals_disjoint(run.snapshot())) break;
    if (run.budget_exhausted()) {
      run.trace().truncated = true;
      return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
    }
  }

  // Phase 2: best-gap identification over adjacent pairs, reusing phase-1
  // samples as paired differences.
  const std::vector<std::size_t> order(run.order().begin(), run.order().end());
  std::vector<GapArm> gaps(k - 1);
  for (std::size_t g = 0; g + 1 < k; ++g) {
    GapArm& arm = gaps[g];
    arm.upper_arm = order[g];
    arm.lower_arm = order[g + 1];
    arm.count = run.estimate(arm.upper_arm).stats.count;
    arm.sum = static_cast<double>(arm.count) * (run.means()[arm.upper_arm] - run.means()[arm.lower_arm]);
    arm.noise = std::hypot(instance.arm(arm.upper_arm).sigma, instance.arm(arm.lower_arm).sigma);
  }
  auto width = [&](const GapArm& g) { return radius(g.count, k, config.delta, 1.0) * g.noise; };

  while (true) {
    std::size_t leader = 0;
    for (std::size_t g = 1; g < gaps.size(); ++g) {
      if (gaps[g].mean() > gaps[leader].mean()) leader = g;
    }
    std::size_t challenger = leader == 0 ? 1 : 0;
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      if (g == leader) continue;
      if (gaps[g].mean() + width(gaps[g]) > gaps[challenger].mean() + width(gaps[challenger])) challenger = g;
    }
    if (gaps[leader].mean() - width(gaps[leader]) > gaps[challenger].mean() + width(gaps[challenger])) {
      return run.finish(
          clusters_from_top({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(leader + 1)}, k),
          StopReason::converged);
    }
    std::vector<std::size_t> sampled;
    for (std::size_t g : {leader, challenger}) {
      const double hi = run.draw(gaps[g].upper_arm);
      const double lo = run.draw(gaps[g].lower_arm);
      gaps[g].count += 1;
      gaps[g].sum += hi - lo;
      sampled.push_back(gaps[g].upper_arm);
      sampled.push_back(gaps[g].lower_arm);
    }
    run.begin_record(sampled);
    run.end_round();
    if (run.budget_exhausted()) {
      run.trace().truncated = true;
      return run.finish(report_clusters(run.means()), StopReason::budget_exhausted);
    }
  }
}

RunTrace run_algorithm(Algorithm algorithm, const Instance& instance, const RunConfig& config, RngStream& rng) {
  switch (algorithm) {
    case Algorithm::elimination:
      return max_gap_elim(instance, config, rng);
    case Algorithm::ucb:
      return max_gap_ucb(instance, config, rng);
    case Algorithm::top2_ucb:
      return max_gap_top2_ucb(instance, config, rng);
    case Algorithm::uniform:
      return uniform_baseline(instance, config, rng);
    case Algorithm::naive:
      return naive_sort_then_bai(instance, config, rng);
  }
  throw std::invalid_argument("unknown algorithm");
}

namespace {

template <typename T>
void write_list(std::ostream& out, std::string_view name, const std::vector<T>& values) {
  out << name << '=';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    if constexpr (std::is_floating_point_v<T>) {
      out << csv::format_double(values[i]);
    } else {
      out << values[i];
    }
  }
  out << '\n';
}

}  // namespace

std::string serialize(const RunTrace& trace) {
  std::ostringstream out;
  out << "algorithm=" << to_string(trace.algorithm) << '\n'
      << "stop_round=" << trace.stop_round << '\n'
      << "total_samples=" << trace.total_samples << '\n'
      << "reason=" << to_string(trace.reason) << '\n'
      << "truncated=" << trace.truncated << " degenerate_rounds=" << trace.degenerate_rounds << '\n'
      << "good_event=" << trace.good_event << " first_failure=" << trace.first_good_event_failure << '\n';
  write_list(out, "counts", trace.counts);
  write_list(out, "eliminated_round", trace.eliminated_round);
  write_list(out, "top", trace.clusters.top);
  for (const CheckpointRecord& c : trace.checkpoints) {
    out << "checkpoint " << c.budget << ' ' << c.total_samples << ' ' << c.stopped << '\n';
    write_list(out, " counts", c.counts);
    write_list(out, " top", c.clusters.top);
  }
  for (const RoundRecord& r : trace.rounds) {
    out << "round " << r.round << " good=" << r.good_event << " lower=" << csv::format_double(r.gap_lower) << ' '
        << r.gap_lower_split << '\n';
    write_list(out, " sampled", r.sampled);
    write_list(out, " counts", r.counts);
    write_list(out, " lower_env", r.lower_env);
    write_list(out, " upper_env", r.upper_env);
    write_list(out, " gap_upper", r.gap_upper);
    write_list(out, " active", r.active);
    write_list(out, " top1", r.top1);
    write_list(out, " top2", r.top2);
  }
  return out.str();
}

}  // namespace maxgap
