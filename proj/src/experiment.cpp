#include "dcbsim/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "dcbsim/metrics.hpp"

namespace dcbsim {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDeploymentStream = 0xD39A11ull;
constexpr std::uint64_t kRunStream = 0x51E4Dull;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

json phy_to_json(const PhyParams& p, double l0, double gamma) {
  return json{{"center_freq_hz", p.center_freq_hz},
              {"tx_power_dbm", p.tx_power_dbm},
              {"tx_gain_db", p.tx_gain_db},
              {"rx_gain_db", p.rx_gain_db},
              {"cca_dbm", p.cca_dbm},
              {"capture_threshold_db", p.capture_threshold_db},
              {"noise_dbm", p.noise_dbm},
              {"basic_channel_hz", p.basic_channel_hz},
              {"path_loss_l0_db", l0},
              {"path_loss_exponent", gamma}};
}

json mac_to_json(const MacParams& m) {
  return json{{"cw_min", m.cw_min},
              {"max_stage", m.max_stage},
              {"slot_us", m.slot_s * 1e6},
              {"sifs_us", m.sifs_s * 1e6},
              {"difs_us", m.difs_s * 1e6},
              {"pifs_us", m.pifs_s * 1e6},
              {"phy_header_us", m.phy_header_s * 1e6},
              {"ack_us", m.ack_s * 1e6},
              {"symbol_us", m.symbol_s * 1e6},
              {"mpdu_header_bits", m.mpdu_header_bits}};
}

json traffic_to_json(const TrafficParams& t) {
  return json{{"packet_bits", t.packet_bits},
              {"buffer_packets", t.buffer_packets},
              {"max_aggregation", t.max_aggregation}};
}

json deployment_to_json(const DeploymentParams& d) {
  return json{{"area_m", d.area_m},
              {"wlans", d.n_wlans},
              {"min_ap_separation_m", d.min_ap_separation_m},
              {"sta_distance_min_m", d.sta_distance_min_m},
              {"sta_distance_max_m", d.sta_distance_max_m},
              {"neighbor_load_min_mbps", d.neighbor_load_min_bps / 1e6},
              {"neighbor_load_max_mbps", d.neighbor_load_max_bps / 1e6}};
}

// Applies every present key of `j` through `setters`; unknown keys are errors.
void apply_fields(const json& j, const std::string& ctx,
                  const std::map<std::string, std::function<void(const json&)>>& setters) {
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw std::runtime_error(ctx + ": unknown field '" + key + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw std::runtime_error(ctx + "." + key + ": " + e.what());
    }
  }
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["deployments"] = c.deployments;
  json loads = json::array();
  for (double l : c.loads_bps) loads.push_back(l / 1e6);
  j["loads_mbps"] = loads;
  json schemes = json::array();
  for (Scheme s : c.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  json deltas = json::array();
  for (double d : c.switch_delays_s) deltas.push_back(d * 1e3);
  j["switch_delays_ms"] = deltas;
  j["t_obs_s"] = c.t_obs_s;
  j["iteration_s"] = c.iteration_s;
  j["eta"] = c.eta;
  j["workers"] = c.workers;
  j["sample_period_s"] = c.sample_period_s;
  j["phy"] = phy_to_json(c.phy, c.path_loss_l0_db, c.path_loss_exponent);
  j["mac"] = mac_to_json(c.mac);
  j["traffic"] = traffic_to_json(c.traffic);
  j["deployment"] = deployment_to_json(c.deployment);
  j["mcs_table_csv"] = c.mcs_table_csv;
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  apply_fields(
      j, "config",
      {{"seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); }},
       {"deployments", [&](const json& v) { c.deployments = v.get<int>(); }},
       {"loads_mbps",
        [&](const json& v) {
          c.loads_bps.clear();
          for (const auto& l : v) c.loads_bps.push_back(l.get<double>() * 1e6);
        }},
       {"schemes",
        [&](const json& v) {
          c.schemes.clear();
          for (const auto& s : v) c.schemes.push_back(scheme_from_string(s.get<std::string>()));
        }},
       {"switch_delays_ms",
        [&](const json& v) {
          c.switch_delays_s.clear();
          for (const auto& d : v) c.switch_delays_s.push_back(d.get<double>() / 1e3);
        }},
       {"t_obs_s", [&](const json& v) { c.t_obs_s = v.get<double>(); }},
       {"iteration_s", [&](const json& v) { c.iteration_s = v.get<double>(); }},
       {"eta", [&](const json& v) { c.eta = v.get<double>(); }},
       {"workers", [&](const json& v) { c.workers = v.get<int>(); }},
       {"sample_period_s", [&](const json& v) { c.sample_period_s = v.get<double>(); }},
       {"mcs_table_csv", [&](const json& v) { c.mcs_table_csv = v.get<std::string>(); }},
       {"phy",
        [&](const json& v) {
          apply_fields(
              v, "config.phy",
              {{"center_freq_hz", [&](const json& x) { c.phy.center_freq_hz = x.get<double>(); }},
               {"tx_power_dbm", [&](const json& x) { c.phy.tx_power_dbm = x.get<double>(); }},
               {"tx_gain_db", [&](const json& x) { c.phy.tx_gain_db = x.get<double>(); }},
               {"rx_gain_db", [&](const json& x) { c.phy.rx_gain_db = x.get<double>(); }},
               {"cca_dbm", [&](const json& x) { c.phy.cca_dbm = x.get<double>(); }},
               {"capture_threshold_db",
                [&](const json& x) { c.phy.capture_threshold_db = x.get<double>(); }},
               {"noise_dbm", [&](const json& x) { c.phy.noise_dbm = x.get<double>(); }},
               {"basic_channel_hz",
                [&](const json& x) { c.phy.basic_channel_hz = x.get<double>(); }},
               {"path_loss_l0_db", [&](const json& x) { c.path_loss_l0_db = x.get<double>(); }},
               {"path_loss_exponent",
                [&](const json& x) { c.path_loss_exponent = x.get<double>(); }}});
        }},
       {"mac",
        [&](const json& v) {
          apply_fields(v, "config.mac",
                       {{"cw_min", [&](const json& x) { c.mac.cw_min = x.get<int>(); }},
                        {"max_stage", [&](const json& x) { c.mac.max_stage = x.get<int>(); }},
                        {"slot_us", [&](const json& x) { c.mac.slot_s = x.get<double>() / 1e6; }},
                        {"sifs_us", [&](const json& x) { c.mac.sifs_s = x.get<double>() / 1e6; }},
                        {"difs_us", [&](const json& x) { c.mac.difs_s = x.get<double>() / 1e6; }},
                        {"pifs_us", [&](const json& x) { c.mac.pifs_s = x.get<double>() / 1e6; }},
                        {"phy_header_us",
                         [&](const json& x) { c.mac.phy_header_s = x.get<double>() / 1e6; }},
                        {"ack_us", [&](const json& x) { c.mac.ack_s = x.get<double>() / 1e6; }},
                        {"symbol_us",
                         [&](const json& x) { c.mac.symbol_s = x.get<double>() / 1e6; }},
                        {"mpdu_header_bits",
                         [&](const json& x) { c.mac.mpdu_header_bits = x.get<int>(); }}});
        }},
       {"traffic",
        [&](const json& v) {
          apply_fields(
              v, "config.traffic",
              {{"packet_bits", [&](const json& x) { c.traffic.packet_bits = x.get<int>(); }},
               {"buffer_packets",
                [&](const json& x) { c.traffic.buffer_packets = x.get<int>(); }},
               {"max_aggregation",
                [&](const json& x) { c.traffic.max_aggregation = x.get<int>(); }}});
        }},
       {"deployment", [&](const json& v) {
          apply_fields(
              v, "config.deployment",
              {{"area_m", [&](const json& x) { c.deployment.area_m = x.get<double>(); }},
               {"wlans", [&](const json& x) { c.deployment.n_wlans = x.get<int>(); }},
               {"min_ap_separation_m",
                [&](const json& x) { c.deployment.min_ap_separation_m = x.get<double>(); }},
               {"sta_distance_min_m",
                [&](const json& x) { c.deployment.sta_distance_min_m = x.get<double>(); }},
               {"sta_distance_max_m",
                [&](const json& x) { c.deployment.sta_distance_max_m = x.get<double>(); }},
               {"neighbor_load_min_mbps",
                [&](const json& x) { c.deployment.neighbor_load_min_bps = x.get<double>() * 1e6; }},
               {"neighbor_load_max_mbps", [&](const json& x) {
                  c.deployment.neighbor_load_max_bps = x.get<double>() * 1e6;
                }}});
        }}});
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return experiment_config_from_json(text);
}

std::vector<CellKey> enumerate_cells(const ExperimentConfig& config) {
  std::vector<CellKey> cells;
  for (int d = 0; d < config.deployments; ++d) {
    for (double load : config.loads_bps) {
      for (Scheme scheme : config.schemes) {
        if (scheme == Scheme::FP) {
          cells.push_back({d, load, scheme, 0.0});  // FP never switches
        } else {
          for (double delta : config.switch_delays_s) cells.push_back({d, load, scheme, delta});
        }
      }
    }
  }
  return cells;
}

SimParams sim_params_for(const ExperimentConfig& config, Scheme scheme, double switch_delay_s,
                         const McsTable& table) {
  SimParams p;
  p.phy = config.phy;
  p.mac = config.mac;
  p.traffic = config.traffic;
  p.selection = {scheme, config.eta, config.iteration_s, switch_delay_s};
  p.t_obs_s = config.t_obs_s;
  p.sample_period_s = config.sample_period_s;
  p.mcs = table;
  p.path_loss = log_distance_path_loss(config.path_loss_l0_db, config.path_loss_exponent);
  return p;
}

namespace {

std::string decision_rows_csv(const CellKey& key, const SimulationResult& result) {
  std::string out;
  for (const DecisionRow& d : result.decisions) {
    out += std::to_string(key.deployment) + "," + fmt("%.0f", key.load_bps) + "," +
           to_string(key.scheme) + "," + fmt("%g", key.switch_delay_s * 1e3) + "," +
           std::to_string(d.wlan) + "," + fmt("%.6f", d.t) + "," + (d.satisfied ? "1" : "0") + "," +
           std::to_string(d.old_primary) + "," + std::to_string(d.new_primary);
    for (int c = 0; c < kNumChannels; ++c)
      out += std::string(",") + (d.rhat_valid ? fmt("%.3f", d.rhat_bps[c]) : "");
    out += "\n";
  }
  return out;
}

std::string occupancy_rows_csv(const CellKey& key, const SimulationResult& result) {
  std::string out;
  for (const OccupancyRow& r : result.occupancy)
    out += std::to_string(key.deployment) + "," + fmt("%.0f", key.load_bps) + "," +
           to_string(key.scheme) + "," + fmt("%g", key.switch_delay_s * 1e3) + "," +
           std::to_string(r.wlan) + "," + std::to_string(r.iteration) + "," + r.entry + "," +
           fmt("%.9f", r.probability) + "\n";
  return out;
}

}  // namespace

ExperimentResult run_experiment_cells(const ExperimentConfig& config, const RunFlags& flags,
                                      std::vector<std::string>* decision_csv,
                                      std::vector<std::string>* occupancy_csv) {
  McsTable table =
      config.mcs_table_csv.empty() ? McsTable::default_11ax() : McsTable::load_csv(config.mcs_table_csv);

  // One scenario per deployment, shared by every cell of that deployment.
  std::vector<Scenario> scenarios;
  scenarios.reserve(config.deployments);
  for (int d = 0; d < config.deployments; ++d)
    scenarios.push_back(
        generate_scenario(config.deployment, mix_seed(config.seed, kDeploymentStream, d)));

  std::vector<CellKey> cells = enumerate_cells(config);
  std::vector<CellResult> results(cells.size());
  std::vector<std::string> dec_rows(flags.decision_log ? cells.size() : 0);
  std::vector<std::string> occ_rows(flags.occupancy_dump ? cells.size() : 0);

  auto run_cell = [&](size_t i) {
    const CellKey& key = cells[i];
    CellResult& out = results[i];
    out.key = key;
    try {
      SimParams params = sim_params_for(config, key.scheme, key.switch_delay_s, table);
      params.collect_decisions = flags.decision_log;
      params.collect_occupancy = flags.occupancy_dump;
      Scenario scenario = scenarios[key.deployment];
      scenario.wlans.at(0).load_bps = key.load_bps;
      SimulationResult result = run_simulation(
          scenario, params, mix_seed(config.seed, kRunStream, key.deployment));
      out.s_mean_bps = throughput_bps(result, 0);
      if (auto d = delay_stats(result, 0)) out.d_mean_s = d->mean_s;
      out.k_first = first_satisfied_iteration(result, 0);
      if (flags.decision_log) dec_rows[i] = decision_rows_csv(key, result);
      if (flags.occupancy_dump) occ_rows[i] = occupancy_rows_csv(key, result);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  int workers = config.workers > 0 ? config.workers
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, static_cast<int>(cells.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  ExperimentResult out;
  out.cells = std::move(results);
  for (const CellResult& r : out.cells)
    if (!r.error.empty()) ++out.failed;
  if (decision_csv) *decision_csv = std::move(dec_rows);
  if (occupancy_csv) *occupancy_csv = std::move(occ_rows);
  return out;
}

namespace {

struct GroupKey {
  int scheme_idx;
  int delta_idx;
  int load_idx;
  auto operator<=>(const GroupKey&) const = default;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                   const RunFlags& flags) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<std::string> dec_rows, occ_rows;
  ExperimentResult result = run_experiment_cells(config, flags,
                                                 flags.decision_log ? &dec_rows : nullptr,
                                                 flags.occupancy_dump ? &occ_rows : nullptr);

  // runs.csv: one row per successful cell, in enumeration order.
  std::string runs = "scenario_id,scheme,delta,load,s_mean,d_mean,k_first\n";
  std::string errors = "scenario_id,scheme,delta,load,error\n";
  for (const CellResult& r : result.cells) {
    std::string prefix = std::to_string(r.key.deployment) + "," + to_string(r.key.scheme) + "," +
                         fmt("%g", r.key.switch_delay_s * 1e3) + "," + fmt("%.0f", r.key.load_bps);
    if (!r.error.empty()) {
      errors += prefix + "," + r.error + "\n";
      continue;
    }
    runs += prefix + "," + fmt("%.3f", r.s_mean_bps) + "," +
            (r.d_mean_s ? fmt("%.9f", *r.d_mean_s) : "") + "," +
            (r.k_first ? std::to_string(*r.k_first) : "") + "\n";
  }

  // Aggregates per (scheme, delta, load), in config order.
  auto delta_index = [&](Scheme scheme, double delta) {
    if (scheme == Scheme::FP) return 0;
    for (size_t i = 0; i < config.switch_delays_s.size(); ++i)
      if (config.switch_delays_s[i] == delta) return static_cast<int>(i);
    return 0;
  };
  auto scheme_index = [&](Scheme scheme) {
    for (size_t i = 0; i < config.schemes.size(); ++i)
      if (config.schemes[i] == scheme) return static_cast<int>(i);
    return 0;
  };
  auto load_index = [&](double load) {
    for (size_t i = 0; i < config.loads_bps.size(); ++i)
      if (config.loads_bps[i] == load) return static_cast<int>(i);
    return 0;
  };

  std::map<GroupKey, std::vector<const CellResult*>> groups;
  for (const CellResult& r : result.cells) {
    if (!r.error.empty()) continue;
    groups[{scheme_index(r.key.scheme), delta_index(r.key.scheme, r.key.switch_delay_s),
            load_index(r.key.load_bps)}]
        .push_back(&r);
  }

  int max_k = static_cast<int>(config.t_obs_s / config.iteration_s + 1e-9);
  std::string agg =
      "scheme,delta,load,n_runs,s_mean,p_desired,d_mean_p5,d_mean_p25,d_mean_p50,d_mean_p75,d_mean_"
      "p95\n";
  std::string cdf_csv = "scheme,delta,load,k,cdf\n";
  for (const auto& [gk, cells] : groups) {
    const CellKey& key0 = cells.front()->key;
    std::string prefix = to_string(key0.scheme) + "," + fmt("%g", key0.switch_delay_s * 1e3) + "," +
                         fmt("%.0f", key0.load_bps);
    std::vector<double> s_means;
    std::vector<double> d_means;
    std::vector<std::optional<int>> k_firsts;
    for (const CellResult* c : cells) {
      s_means.push_back(c->s_mean_bps);
      if (c->d_mean_s) d_means.push_back(*c->d_mean_s);
      k_firsts.push_back(c->k_first);
    }
    double s_mean = 0;
    for (double s : s_means) s_mean += s;
    s_mean /= s_means.size();
    double p_desired = satisfaction_probability(s_means, key0.load_bps);
    agg += prefix + "," + std::to_string(s_means.size()) + "," + fmt("%.3f", s_mean) + "," +
           fmt("%.6f", p_desired);
    if (!d_means.empty()) {
      std::sort(d_means.begin(), d_means.end());
      auto q = [&](double p) {
        double h = p * (d_means.size() - 1);
        size_t lo = static_cast<size_t>(h);
        size_t hi = std::min(lo + 1, d_means.size() - 1);
        return d_means[lo] + (h - lo) * (d_means[hi] - d_means[lo]);
      };
      agg += "," + fmt("%.9f", q(0.05)) + "," + fmt("%.9f", q(0.25)) + "," + fmt("%.9f", q(0.50)) +
             "," + fmt("%.9f", q(0.75)) + "," + fmt("%.9f", q(0.95));
    } else {
      agg += ",,,,,";
    }
    agg += "\n";
    std::vector<double> cdf = iterations_to_satisfaction_cdf(k_firsts, max_k);
    for (int k = 1; k <= max_k; ++k)
      cdf_csv += prefix + "," + std::to_string(k) + "," + fmt("%.6f", cdf[k - 1]) + "\n";
  }

  write_file(fs::path(out_dir) / "runs.csv", runs);
  write_file(fs::path(out_dir) / "aggregate.csv", agg);
  write_file(fs::path(out_dir) / "cdf.csv", cdf_csv);
  if (result.failed > 0) write_file(fs::path(out_dir) / "errors.csv", errors);

  if (flags.decision_log) {
    std::string log =
        "scenario_id,load,scheme,delta,wlan,t,satisfied,old_p,new_p,rhat_p1,rhat_p2,rhat_p3,rhat_"
        "p4,rhat_p5,rhat_p6,rhat_p7,rhat_p8\n";
    for (const std::string& rows : dec_rows) log += rows;
    write_file(fs::path(out_dir) / "decision_log.csv", log);
  }
  if (flags.occupancy_dump) {
    std::string dump = "scenario_id,load,scheme,delta,wlan,iteration,entry,probability\n";
    for (const std::string& rows : occ_rows) dump += rows;
    write_file(fs::path(out_dir) / "occupancy.csv", dump);
  }

  nlohmann::json manifest;
  manifest["tool"] = "dcbsim";
  manifest["version"] = "0.1.0";
  manifest["cells"] = result.cells.size();
  manifest["failed"] = result.failed;
  manifest["config"] = nlohmann::json::parse(experiment_config_to_json(config));
  write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");

  return result.failed > 0 ? 1 : 0;
}

}  // namespace dcbsim
