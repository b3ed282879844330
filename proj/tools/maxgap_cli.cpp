#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "maxgap/experiment.hpp"
#include "maxgap/kernels.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<double> delta;
  std::optional<std::string> instance;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--trials", o.trials, "trials per algorithm");
  cmd->add_option("--delta", o.delta, "confidence parameter");
  cmd->add_option("--instance", o.instance, "builtin instance name or means file");
}

maxgap::ExperimentConfig resolve(const Overrides& o) {
  maxgap::ExperimentConfig c = o.config.empty() ? maxgap::ExperimentConfig{} : maxgap::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.delta) c.delta = *o.delta;
  if (o.instance) c.instance = *o.instance;
  if (!o.out.empty()) c.out = o.out;
  return c;
}

// Output is assembled in memory and written only once the command succeeded.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f.flush()) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaxGap bandit simulator"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "kernel set: scalar or avx2 (default: best available)");

  Overrides run_o, profile_o, hard_o;
  auto* run = app.add_subcommand("run", "seeded trial sweep over algorithms and budgets");
  add_common(run, run_o);
  auto* profile = app.add_subcommand("profile", "per-arm sample counts of one MaxGapUCB run");
  add_common(profile, profile_o);
  auto* hardness = app.add_subcommand("hardness", "per-arm hardness parameters and predicted sample counts");
  add_common(hardness, hard_o);

  auto* verify = app.add_subcommand("verify-bounds", "check gap bounds against the brute-force oracle");
  std::size_t arms = 4, snapshots = 1000;
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  verify->add_option("--arms", arms, "number of arms (2..8)");
  verify->add_option("--snapshots", snapshots, "random snapshots");
  verify->add_option("--seed", verify_seed, "seed");
  verify->add_option("--out", verify_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernels.empty()) {
      const auto isa = maxgap::kernels::parse_isa(kernels);
      if (!isa || !maxgap::kernels::supported(*isa)) throw std::runtime_error("kernel set not available: " + kernels);
      maxgap::kernels::set_active_isa(*isa);
    }
    std::ostringstream text;
    if (*run) {
      const auto c = resolve(run_o);
      const auto instance = maxgap::make_instance(c);
      maxgap::write_results(text, maxgap::run_experiment(c, instance));
      emit(c.out, text.str());
    } else if (*profile) {
      const auto c = resolve(profile_o);
      maxgap::allocation_profile(c, maxgap::make_instance(c), text);
      emit(c.out, text.str());
    } else if (*hardness) {
      const auto c = resolve(hard_o);
      maxgap::hardness_report(c, maxgap::make_instance(c), text);
      emit(c.out, text.str());
    } else if (*verify) {
      const auto check = maxgap::verify_bounds(arms, snapshots, verify_seed);
      maxgap::write_bound_check(text, check);
      emit(verify_out, text.str());
      if (check.counterexample) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
