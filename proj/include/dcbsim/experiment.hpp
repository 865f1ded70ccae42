#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcbsim/engine.hpp"
#include "dcbsim/scenario.hpp"

namespace dcbsim {

// Batch sweep: deployments x loads x schemes x switching delays. One scenario
// per deployment is reused across every cell (paired comparison); only the
// central WLAN's offered load changes with the sweep.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int deployments = 200;
  std::vector<double> loads_bps = {1e6,   25e6,  50e6,  75e6,  100e6, 125e6, 150e6, 175e6, 200e6,
                                   225e6, 250e6, 275e6, 300e6, 325e6, 350e6, 375e6, 400e6};
  std::vector<Scheme> schemes = {Scheme::FP, Scheme::DR, Scheme::DF, Scheme::DW};
  std::vector<double> switch_delays_s = {0.0, 0.1};
  double t_obs_s = 25.0;
  double iteration_s = 1.0;
  double eta = 0.9;
  int workers = 0;  // 0 = hardware concurrency
  double sample_period_s = 1e-3;
  PhyParams phy{};
  double path_loss_l0_db = 54.12;
  double path_loss_exponent = 2.06;
  MacParams mac{};
  TrafficParams traffic{};
  DeploymentParams deployment{};
  std::string mcs_table_csv;  // empty = built-in table
};

std::string experiment_config_to_json(const ExperimentConfig& config);
// Missing fields keep their defaults; unknown fields are rejected.
ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct CellKey {
  int deployment = 0;
  double load_bps = 0.0;
  Scheme scheme = Scheme::FP;
  double switch_delay_s = 0.0;
};

// Row-major cell order: deployment, load, scheme, delay. FP ignores the
// switching delay, so it contributes exactly one cell per (deployment, load).
std::vector<CellKey> enumerate_cells(const ExperimentConfig& config);

struct CellResult {
  CellKey key;
  double s_mean_bps = 0.0;
  std::optional<double> d_mean_s;
  std::optional<int> k_first;
  std::string error;  // non-empty when the run failed
};

struct RunFlags {
  bool decision_log = false;
  bool occupancy_dump = false;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  int failed = 0;
};

// Runs every cell (in parallel when workers > 1) without touching the disk.
ExperimentResult run_experiment_cells(const ExperimentConfig& config, const RunFlags& flags,
                                      std::vector<std::string>* decision_csv = nullptr,
                                      std::vector<std::string>* occupancy_csv = nullptr);

// Full batch run: writes runs.csv, aggregate.csv, cdf.csv, manifest.json and
// the optional debug CSVs into out_dir. Returns 0 on success, 1 when any
// cell failed. Output bytes depend only on (config, seed), not on workers.
int run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                   const RunFlags& flags);

// SimParams for one cell of the sweep.
SimParams sim_params_for(const ExperimentConfig& config, Scheme scheme, double switch_delay_s,
                         const McsTable& table);

}  // namespace dcbsim
