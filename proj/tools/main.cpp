// dcbsim command-line front end: batch experiment runner plus scenario
// generation and validation utilities.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dcbsim/experiment.hpp"
#include "dcbsim/scenario.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers,
            bool seed_set, std::uint64_t seed, bool decision_log, bool occupancy_dump) {
  dcbsim::ExperimentConfig config;
  try {
    config = dcbsim::load_experiment_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (workers >= 0) config.workers = workers;
  if (seed_set) config.seed = seed;
  dcbsim::RunFlags flags{decision_log, occupancy_dump};
  try {
    int rc = dcbsim::run_experiment(config, out_dir, flags);
    if (rc != 0) std::cerr << "some cells failed; see errors.csv\n";
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "experiment error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_scenario_gen(const std::string& out_path, std::uint64_t seed,
                     const dcbsim::DeploymentParams& params) {
  try {
    dcbsim::Scenario s = dcbsim::generate_scenario(params, seed);
    dcbsim::save_scenario(s, out_path);
    std::cout << "wrote " << out_path << " (" << s.wlans.size() << " WLANs)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_scenario_validate(const std::string& path, const dcbsim::DeploymentParams& params) {
  try {
    dcbsim::Scenario s = dcbsim::load_scenario(path);
    std::vector<std::string> problems = dcbsim::validate_scenario(s, params);
    if (problems.empty()) {
      std::cout << path << ": ok (" << s.wlans.size() << " WLANs)\n";
      return 0;
    }
    for (const std::string& p : problems) std::cerr << path << ": " << p << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcbsim: WLAN dynamic channel bonding simulator with online primary selection"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a batch experiment from a JSON config");
  std::string config_path, out_dir;
  int workers = -1;
  std::uint64_t seed = 0;
  bool decision_log = false, occupancy_dump = false;
  run->add_option("--config", config_path, "Experiment config JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--workers", workers, "Worker threads (0 = all cores)");
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_flag("--decision-log", decision_log, "Write per-iteration decision_log.csv");
  run->add_flag("--occupancy-dump", occupancy_dump, "Write per-iteration occupancy.csv");

  // scenario gen/validate
  auto* scenario = app.add_subcommand("scenario", "Scenario file utilities");
  scenario->require_subcommand(1);
  auto* gen = scenario->add_subcommand("gen", "Generate a random deployment");
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  dcbsim::DeploymentParams dep;
  double load_a_mbps = dep.central_load_bps / 1e6;
  gen->add_option("--out", gen_out, "Output scenario JSON")->required();
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--wlans", dep.n_wlans, "Number of WLANs");
  gen->add_option("--area", dep.area_m, "Square side in meters");
  gen->add_option("--min-ap-sep", dep.min_ap_separation_m, "Minimum AP separation in meters");
  gen->add_option("--load-a", load_a_mbps, "Central WLAN load in Mbps");

  auto* validate = scenario->add_subcommand("validate", "Check a scenario file");
  std::string validate_path;
  validate->add_option("file", validate_path, "Scenario JSON")->required();

  // describe-defaults
  auto* describe = app.add_subcommand("describe-defaults", "Print the default experiment config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are config errors
  }

  if (run->parsed())
    return cmd_run(config_path, out_dir, workers, seed_opt->count() > 0, seed, decision_log,
                   occupancy_dump);
  if (gen->parsed()) {
    dep.central_load_bps = load_a_mbps * 1e6;
    return cmd_scenario_gen(gen_out, gen_seed, dep);
  }
  if (validate->parsed()) return cmd_scenario_validate(validate_path, dcbsim::DeploymentParams{});
  if (describe->parsed()) {
    std::cout << dcbsim::experiment_config_to_json(dcbsim::ExperimentConfig{});
    return 0;
  }
  return 2;
}
