#include "maxgap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "maxgap/csv.hpp"
#include "maxgap/gapbounds.hpp"
#include "maxgap/hardness.hpp"

namespace maxgap {

namespace {

using nlohmann::json;

template <typename T>
void read_key(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {
      "instance",   "sigma",          "arms",           "min_gap",          "max_gap",         "nu",
      "eps",        "algorithms",     "delta",          "trials",           "seed",            "checkpoints",
      "checkpoint_min", "checkpoint_max", "checkpoint_count", "ucb_stop_factor", "budget_cap", "elim_early_stop",
      "alpha",      "threads",        "out"};
  for (const auto& item : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) ==
        std::end(known)) {
      throw ConfigError("unknown config key '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  read_key(j, "instance", c.instance);
  if (j.contains("sigma")) {
    double s = 0.0;
    read_key(j, "sigma", s);
    c.sigma = s;
  }
  read_key(j, "arms", c.arms);
  read_key(j, "min_gap", c.min_gap);
  read_key(j, "max_gap", c.max_gap);
  read_key(j, "nu", c.nu);
  read_key(j, "eps", c.eps);
  read_key(j, "algorithms", c.algorithms);
  read_key(j, "delta", c.delta);
  read_key(j, "trials", c.trials);
  read_key(j, "seed", c.seed);
  read_key(j, "checkpoints", c.checkpoints);
  read_key(j, "checkpoint_min", c.checkpoint_min);
  read_key(j, "checkpoint_max", c.checkpoint_max);
  read_key(j, "checkpoint_count", c.checkpoint_count);
  read_key(j, "ucb_stop_factor", c.ucb_stop_factor);
  read_key(j, "budget_cap", c.budget_cap);
  read_key(j, "elim_early_stop", c.elim_early_stop);
  read_key(j, "alpha", c.alpha);
  read_key(j, "threads", c.threads);
  read_key(j, "out", c.out);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(c.ucb_stop_factor > 0.0)) throw ConfigError("ucb_stop_factor must be positive");
  if (c.algorithms.empty()) throw ConfigError("no algorithms given");
  for (const std::string& name : c.algorithms) {
    if (!parse_algorithm(name)) throw ConfigError("unknown algorithm '" + name + "'");
  }
  for (std::size_t i = 1; i < c.checkpoints.size(); ++i) {
    if (c.checkpoints[i] <= c.checkpoints[i - 1]) throw ConfigError("checkpoints must be strictly increasing");
  }
  if (c.checkpoints.empty() && c.checkpoint_count < 1) throw ConfigError("checkpoint_count must be at least 1");
}

Instance make_instance(const ExperimentConfig& c) {
  if (c.instance == "two-gap") return build_two_gap_instance();
  if (c.instance == "one-gap") return build_one_gap_instance(c.arms, c.min_gap, c.max_gap, c.sigma.value_or(1.0));
  if (c.instance == "lower-bound") return build_lower_bound_instance(c.nu, c.eps);
  if (c.instance == "lower-bound-alt") return build_lower_bound_alternative(c.nu, c.eps);
  if (c.instance == "streetview-like") return build_streetview_like_instance();
  if (!std::filesystem::exists(c.instance)) {
    throw ConfigError("unknown instance '" + c.instance + "' (not a builtin name or an existing file)");
  }
  return load_means_file(c.instance, c.sigma.value_or(1.0));
}

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi, std::size_t count) {
  if (lo < 1 || hi < lo || count < 1) throw std::invalid_argument("log_grid needs 1 <= lo <= hi and count >= 1");
  std::vector<std::uint64_t> grid;
  if (count == 1) return {hi};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    std::uint64_t v = i + 1 == count ? hi : static_cast<std::uint64_t>(std::llround(std::exp(x)));
    v = std::clamp(v, lo, hi);
    if (grid.empty() || v > grid.back()) grid.push_back(v);
  }
  return grid;
}

std::vector<std::uint64_t> checkpoint_schedule(const ExperimentConfig& c, std::size_t arms) {
  if (!c.checkpoints.empty()) return c.checkpoints;
  const std::uint64_t lo = c.checkpoint_min == 0 ? arms : c.checkpoint_min;
  return log_grid(lo, std::max(lo, c.checkpoint_max), c.checkpoint_count);
}

namespace {

TrialOutcome run_trial(Algorithm algorithm, std::uint64_t trial, const ExperimentConfig& c, const Instance& instance,
                       const Clustering& truth, const std::vector<std::uint64_t>& checkpoints) {
  RunConfig rc;
  rc.delta = c.delta;
  rc.ucb_stop_factor = c.ucb_stop_factor;
  rc.elim_early_stop = c.elim_early_stop;
  rc.checkpoints = checkpoints;
  rc.budget_cap = algorithm == Algorithm::uniform ? std::max<std::uint64_t>(checkpoints.back(), instance.size())
                                                  : c.budget_cap;
  TrialOutcome o;
  o.algorithm = algorithm;
  o.trial = trial;
  o.seed = c.seed + trial;
  RngStream rng(o.seed);
  const RunTrace trace = run_algorithm(algorithm, instance, rc, rng);
  for (const CheckpointRecord& cp : trace.checkpoints) {
    o.checkpoint_samples.push_back(cp.total_samples);
    o.checkpoint_stopped.push_back(cp.stopped);
    o.checkpoint_error.push_back(cp.clusters != truth);
  }
  o.stop_samples = trace.total_samples;
  o.truncated = trace.truncated;
  o.stop_error = trace.clusters != truth;
  o.good_event = trace.good_event;
  o.counts = trace.counts;
  return o;
}

double binomial_std(double p) { return std::sqrt(p * (1.0 - p)); }

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c, const Instance& instance) {
  validate(c);
  ExperimentResult result;
  result.checkpoints = checkpoint_schedule(c, instance.size());
  const Clustering truth = true_clusters(instance);

  std::vector<Algorithm> algorithms;
  for (const std::string& name : c.algorithms) algorithms.push_back(*parse_algorithm(name));
  const std::size_t jobs = algorithms.size() * c.trials;
  result.trials.resize(jobs);

  unsigned workers = c.threads != 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs && !failed; i = next++) {
      try {
        result.trials[i] =
            run_trial(algorithms[i / c.trials], i % c.trials, c, instance, truth, result.checkpoints);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    AlgorithmSummary s;
    s.algorithm = algorithms[a];
    const std::size_t n_cp = result.checkpoints.size();
    std::vector<double> errors(n_cp, 0.0);
    double stop_errors = 0.0, stop_samples = 0.0;
    for (std::uint64_t t = 0; t < c.trials; ++t) {
      const TrialOutcome& o = result.trials[a * c.trials + t];
      for (std::size_t k = 0; k < n_cp; ++k) errors[k] += o.checkpoint_error[k] ? 1.0 : 0.0;
      if (!o.truncated) {
        ++s.completed;
        stop_errors += o.stop_error ? 1.0 : 0.0;
        stop_samples += static_cast<double>(o.stop_samples);
      }
    }
    for (std::size_t k = 0; k < n_cp; ++k) {
      s.error_rate.push_back(errors[k] / static_cast<double>(c.trials));
      s.error_std.push_back(binomial_std(s.error_rate.back()));
    }
    if (s.completed > 0) {
      s.stop_error_rate = stop_errors / static_cast<double>(s.completed);
      s.stop_error_std = binomial_std(s.stop_error_rate);
      s.mean_stop_samples = stop_samples / static_cast<double>(s.completed);
    }
    result.summaries.push_back(std::move(s));
  }
  return result;
}

void write_results(std::ostream& out, const ExperimentResult& result) {
  csv::Writer w(out);
  w.header({"row_type", "algorithm", "trial", "seed", "budget", "total_samples", "stopped", "truncated", "error",
            "error_rate", "error_std", "runs"});
  for (const TrialOutcome& o : result.trials) {
    const std::string_view name = to_string(o.algorithm);
    for (std::size_t k = 0; k < result.checkpoints.size(); ++k) {
      w.field("checkpoint").field(name).field(o.trial).field(o.seed).field(result.checkpoints[k]);
      w.field(o.checkpoint_samples[k]).field(static_cast<bool>(o.checkpoint_stopped[k])).field(o.truncated);
      w.field(static_cast<bool>(o.checkpoint_error[k])).empty().empty().empty();
      w.end_row();
    }
    w.field("stop").field(name).field(o.trial).field(o.seed).empty().field(o.stop_samples).field(true);
    w.field(o.truncated).field(o.stop_error).empty().empty().empty();
    w.end_row();
  }
  for (const AlgorithmSummary& s : result.summaries) {
    const std::string_view name = to_string(s.algorithm);
    for (std::size_t k = 0; k < result.checkpoints.size(); ++k) {
      w.field("aggregate").field(name).empty().empty().field(result.checkpoints[k]).empty().empty().empty().empty();
      w.field(s.error_rate[k]).field(s.error_std[k]);
      w.field(static_cast<std::uint64_t>(result.trials.size() / result.summaries.size()));
      w.end_row();
    }
    w.field("aggregate_stop").field(name).empty().empty().empty().field(s.mean_stop_samples).empty().empty();
    w.empty().field(s.stop_error_rate).field(s.stop_error_std).field(s.completed);
    w.end_row();
  }
}

std::optional<std::uint64_t> first_budget_below(const ExperimentResult& result, Algorithm algorithm,
                                                double threshold, bool inclusive) {
  for (const AlgorithmSummary& s : result.summaries) {
    if (s.algorithm != algorithm) continue;
    for (std::size_t k = 0; k < s.error_rate.size(); ++k) {
      const double e = s.error_rate[k];
      if (inclusive ? e <= threshold : e < threshold) return result.checkpoints[k];
    }
    return std::nullopt;
  }
  return std::nullopt;
}

void allocation_profile(const ExperimentConfig& c, const Instance& instance, std::ostream& out) {
  validate(c);
  RunConfig rc;
  rc.delta = c.delta;
  rc.ucb_stop_factor = c.ucb_stop_factor;
  rc.budget_cap = c.budget_cap;
  rc.checkpoints = checkpoint_schedule(c, instance.size());
  RngStream rng(c.seed);
  const RunTrace trace = max_gap_ucb(instance, rc, rng);
  csv::Writer w(out);
  w.header({"checkpoint", "total_samples", "arm", "rank", "mean", "count"});
  for (const CheckpointRecord& cp : trace.checkpoints) {
    for (std::size_t a = 0; a < instance.size(); ++a) {
      w.field(cp.budget).field(cp.total_samples).field(static_cast<std::uint64_t>(a + 1));
      w.field(static_cast<std::uint64_t>(instance.rank_of(a) + 1)).field(instance.arm(a).mean).field(cp.counts[a]);
      w.end_row();
    }
  }
}

namespace {

IntervalSnapshot random_snapshot(std::size_t k, RngStream& rng) {
  IntervalSnapshot s;
  auto endpoint = [&] {
    // a coarse grid half of the time, so endpoints coincide often
    if (rng.uniform(0.0, 1.0) < 0.5) return std::floor(rng.uniform(0.0, 5.0)) / 4.0;
    return rng.uniform(0.0, 1.0);
  };
  for (std::size_t i = 0; i < k; ++i) {
    const double mode = rng.uniform(0.0, 1.0);
    double lo, hi;
    if (i > 0 && mode < 0.15) {
      const auto j = static_cast<std::size_t>(rng.next_u64() % i);
      lo = s.lower[j];
      hi = s.upper[j];
    } else if (mode < 0.3) {
      lo = hi = endpoint();
    } else {
      lo = endpoint();
      hi = endpoint();
      if (lo > hi) std::swap(lo, hi);
    }
    s.lower.push_back(lo);
    s.upper.push_back(hi);
  }
  return s;
}

double diff(double a, double b) {
  if (a == b) return 0.0;  // also equal infinities
  return std::abs(a - b);
}

std::string dump_counterexample(const IntervalSnapshot& s, std::size_t arm, double engine_r, double engine_l,
                                const UpperGap& direct, const SidedGap& oracle) {
  nlohmann::ordered_json j;
  j["arm"] = arm;
  j["lower"] = s.lower;
  j["upper"] = s.upper;
  j["engine"] = {{"right", engine_r}, {"left", engine_l}};
  j["direct"] = {{"right", direct.right}, {"left", direct.left}};
  j["brute_force"] = {{"right", oracle.right}, {"left", oracle.left}};
  return j.dump(2);
}

}  // namespace

BoundCheck verify_bounds(std::size_t arms, std::size_t snapshots, std::uint64_t seed) {
  if (arms < 2 || arms > kBruteForceMaxArms) throw std::invalid_argument("verify_bounds supports 2..8 arms");
  BoundCheck check;
  check.arms = arms;
  RngStream rng(seed);
  GapBoundEngine engine;
  GapBounds bounds;
  for (std::size_t n = 0; n < snapshots; ++n) {
    const IntervalSnapshot s = random_snapshot(arms, rng);
    engine.compute(s, bounds);
    ++check.snapshots;
    for (std::size_t a = 0; a < arms; ++a) {
      const UpperGap direct = upper_gap(a, s);
      const SidedGap oracle = brute_force_upper_gap(a, s);
      const double d = std::max({diff(bounds.right[a], oracle.right), diff(bounds.left[a], oracle.left),
                                 diff(direct.right, oracle.right), diff(direct.left, oracle.left)});
      check.max_discrepancy = std::max(check.max_discrepancy, d);
      if (!(d <= 1e-12)) {
        check.counterexample = dump_counterexample(s, a, bounds.right[a], bounds.left[a], direct, oracle);
        return check;
      }
    }
  }
  return check;
}

void write_bound_check(std::ostream& out, const BoundCheck& check) {
  out << "arms=" << check.arms << " snapshots=" << check.snapshots
      << " max_discrepancy=" << csv::format_double(check.max_discrepancy) << '\n';
  if (check.counterexample) out << "counterexample=" << *check.counterexample << '\n';
}

void hardness_report(const ExperimentConfig& c, const Instance& instance, std::ostream& out) {
  const HardnessReport r = analyze_hardness(instance);
  csv::Writer w(out);
  w.header({"arm", "quantity", "value"});
  auto row = [&](std::string_view arm, std::string_view quantity, double value) {
    w.field(arm).field(quantity).field(value);
    w.end_row();
  };
  for (std::size_t a = 0; a < instance.size(); ++a) {
    const std::string arm = std::to_string(a + 1);
    row(arm, "mean", instance.arm(a).mean);
    row(arm, "rank", static_cast<double>(instance.rank_of(a) + 1));
    row(arm, "optimal", r.optimal[a] ? 1.0 : 0.0);
    row(arm, "gamma_r", r.gamma.right[a]);
    row(arm, "gamma_l", r.gamma.left[a]);
    row(arm, "gamma", r.gamma.value[a]);
    row(arm, "rho_r", r.rho.right[a]);
    row(arm, "rho_l", r.rho.left[a]);
    row(arm, "rho", r.rho.value[a]);
    row(arm, "naive_gamma_r", r.naive.right[a]);
    row(arm, "naive_gamma_l", r.naive.left[a]);
    row(arm, "naive_gamma", r.naive.value[a]);
  }
  row("all", "max_gap", instance.truth().max_gap);
  row("all", "delta", c.delta);
  row("all", "alpha", c.alpha);
  const PredictedComplexity p = predicted_complexity(r, c.delta, c.alpha);
  row("all", "H_main", p.main);
  row("all", "H_elim", p.elim);
  row("all", "H_ucb", p.ucb);
}

}  // namespace maxgap
