#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcbsim/rng.hpp"
#include "dcbsim/types.hpp"

namespace dcbsim {

struct WlanConfig {
  int id = 0;
  Vec2 ap;
  Vec2 sta;
  Allocation alloc;
  bool dcb = true;  // false = single-channel only
  double load_bps = 0.0;

  friend bool operator==(const WlanConfig& a, const WlanConfig& b) {
    return a.id == b.id && a.ap == b.ap && a.sta == b.sta && a.alloc == b.alloc &&
           a.dcb == b.dcb && a.load_bps == b.load_bps;
  }
};

struct Scenario {
  std::uint64_t seed = 0;
  std::vector<WlanConfig> wlans;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.seed == b.seed && a.wlans == b.wlans;
  }
};

struct DeploymentParams {
  double area_m = 40.0;         // square side
  int n_wlans = 10;
  double min_ap_separation_m = 10.0;
  double sta_distance_min_m = 1.0;
  double sta_distance_max_m = 5.0;
  double neighbor_load_min_bps = 1e6;
  double neighbor_load_max_bps = 400e6;
  double central_load_bps = 100e6;  // WLAN 0; batch runs override per cell
};

// Random dense deployment: WLAN 0 sits at the center with the full band and
// bonding enabled; the rest are placed uniformly at random subject to the
// minimum AP separation (rejection sampling, bounded attempts). Pure function
// of (params, seed). Throws std::runtime_error("infeasible deployment
// parameters") when rejection sampling exceeds its bound.
Scenario generate_scenario(const DeploymentParams& params, std::uint64_t seed);

// JSON round trip; load(save(s)) == s. Parse and validation failures throw
// std::runtime_error naming the offending field.
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

// Structural and deployment checks; returns human-readable problems, empty
// when the scenario is valid.
std::vector<std::string> validate_scenario(const Scenario& s, const DeploymentParams& params);

}  // namespace dcbsim
