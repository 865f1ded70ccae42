#include "dcbsim/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"

using namespace dcbsim;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.deployments = 2;
  c.loads_bps = {50e6, 200e6};
  c.schemes = {Scheme::FP, Scheme::DW};
  c.switch_delays_s = {0.0};
  c.t_obs_s = 2.0;
  c.workers = 2;
  c.seed = 99;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("cell enumeration: FP contributes one cell, others one per delay") {
  ExperimentConfig c = tiny_config();
  std::vector<CellKey> cells = enumerate_cells(c);
  CHECK(cells.size() == 8);  // 2 deployments x 2 loads x (FP + DW)

  ExperimentConfig full_scale;
  full_scale.deployments = 200;
  CHECK(full_scale.loads_bps.size() == 17);
  CHECK(enumerate_cells(full_scale).size() == 23800);  // 200 x 17 x (1 + 3 x 2)
}

TEST_CASE("config json round trip keeps every field") {
  ExperimentConfig c = tiny_config();
  c.eta = 0.85;
  c.phy.cca_dbm = -79.0;
  c.mac.cw_min = 32;
  c.traffic.buffer_packets = 99;
  c.deployment.n_wlans = 6;
  c.path_loss_exponent = 3.0;
  ExperimentConfig back = experiment_config_from_json(experiment_config_to_json(c));
  CHECK(back.eta == c.eta);
  CHECK(back.phy.cca_dbm == c.phy.cca_dbm);
  CHECK(back.mac.cw_min == c.mac.cw_min);
  CHECK(back.traffic.buffer_packets == c.traffic.buffer_packets);
  CHECK(back.deployment.n_wlans == c.deployment.n_wlans);
  CHECK(back.path_loss_exponent == c.path_loss_exponent);
  CHECK(back.loads_bps == c.loads_bps);
  CHECK(back.schemes == c.schemes);
  CHECK(back.seed == c.seed);

  // Missing fields fall back to defaults; unknown fields are rejected.
  ExperimentConfig sparse = experiment_config_from_json(R"({"deployments": 3})");
  CHECK(sparse.deployments == 3);
  CHECK(sparse.eta == 0.9);
  CHECK(sparse.loads_bps.size() == 17);
  CHECK_THROWS_WITH_AS(experiment_config_from_json(R"({"depolyments": 3})"),
                       doctest::Contains("unknown field"), std::runtime_error);
}

TEST_CASE("experiment outputs are byte-identical across reruns and worker counts") {
  namespace fs = std::filesystem;
  ExperimentConfig c = tiny_config();
  fs::path base = fs::temp_directory_path() / "dcbsim_exp_test";
  fs::remove_all(base);

  ExperimentConfig serial = c;
  serial.workers = 1;
  CHECK(run_experiment(serial, (base / "a").string(), {}) == 0);
  ExperimentConfig parallel = c;
  parallel.workers = 4;
  CHECK(run_experiment(parallel, (base / "b").string(), {}) == 0);
  CHECK(run_experiment(parallel, (base / "c").string(), {}) == 0);

  for (const char* name : {"runs.csv", "aggregate.csv", "cdf.csv"}) {
    std::string a = slurp(base / "a" / name);
    CHECK(a == slurp(base / "b" / name));
    CHECK(a == slurp(base / "c" / name));
  }

  // Row count: header + one per cell.
  std::string runs = slurp(base / "a" / "runs.csv");
  CHECK(std::count(runs.begin(), runs.end(), '\n') == 9);
  CHECK(runs.rfind("scenario_id,scheme,delta,load,s_mean,d_mean,k_first\n", 0) == 0);

  // Different seed changes the bytes.
  ExperimentConfig other = c;
  other.seed = 100;
  CHECK(run_experiment(other, (base / "d").string(), {}) == 0);
  CHECK(slurp(base / "a" / "runs.csv") != slurp(base / "d" / "runs.csv"));

  fs::remove_all(base);
}

TEST_CASE("failing cells are reported and make the exit status 1") {
  namespace fs = std::filesystem;
  ExperimentConfig c = tiny_config();
  // STAs this far out cannot hold MCS 0: every cell fails validation.
  c.deployment.sta_distance_min_m = 99.0;
  c.deployment.sta_distance_max_m = 100.0;
  fs::path dir = fs::temp_directory_path() / "dcbsim_exp_fail";
  fs::remove_all(dir);
  CHECK(run_experiment(c, dir.string(), {}) == 1);
  std::string errors = slurp(dir / "errors.csv");
  CHECK(errors.starts_with("scenario_id,scheme,delta,load,error"));
  CHECK(errors.find("mcs 0") != std::string::npos);
  // Failed cells never reach runs.csv.
  std::string runs = slurp(dir / "runs.csv");
  CHECK(std::count(runs.begin(), runs.end(), '\n') == 1);
  fs::remove_all(dir);
}

TEST_CASE("debug sinks produce the documented headers") {
  namespace fs = std::filesystem;
  ExperimentConfig c = tiny_config();
  c.deployments = 1;
  c.loads_bps = {200e6};
  fs::path dir = fs::temp_directory_path() / "dcbsim_exp_debug";
  fs::remove_all(dir);
  RunFlags flags;
  flags.decision_log = true;
  flags.occupancy_dump = true;
  CHECK(run_experiment(c, dir.string(), flags) == 0);
  CHECK(slurp(dir / "decision_log.csv")
            .starts_with("scenario_id,load,scheme,delta,wlan,t,satisfied,old_p,new_p"));
  CHECK(slurp(dir / "occupancy.csv")
            .starts_with("scenario_id,load,scheme,delta,wlan,iteration,entry,probability"));
  CHECK(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}
