#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcbsim/mac.hpp"
#include "dcbsim/phy.hpp"
#include "dcbsim/scenario.hpp"
#include "dcbsim/selection.hpp"
#include "dcbsim/traffic.hpp"

namespace dcbsim {

struct SimParams {
  PhyParams phy{};
  MacParams mac{};
  TrafficParams traffic{};
  SelectionConfig selection{};
  // WLAN whose primary the scheme manages; everything else keeps its initial
  // primary. -1 lets every WLAN adapt.
  int adaptive_wlan = 0;
  double t_obs_s = 25.0;
  double sample_period_s = 1e-3;  // background occupancy sampler
  McsTable mcs = McsTable::default_11ax();
  PathLossFn path_loss = log_distance_path_loss();
  bool collect_decisions = false;
  bool collect_occupancy = false;
};

struct IterationRecord {
  double s_bps = 0.0;    // acknowledged bits over the iteration / T
  double ell_bps = 0.0;  // generated bits over the iteration / T
  bool satisfied = true;
  ChannelId primary = 1;  // primary in effect during the iteration

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct SwitchEvent {
  double t = 0.0;
  int wlan = 0;
  ChannelId from = 0;
  ChannelId to = 0;

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

struct DecisionRow {
  int wlan = 0;
  double t = 0.0;
  bool satisfied = true;
  ChannelId old_primary = 0;
  ChannelId new_primary = 0;
  std::array<double, kNumChannels> rhat_bps{};
  bool rhat_valid = false;
};

struct OccupancyRow {
  int wlan = 0;
  int iteration = 0;
  std::string entry;  // "pi_c3" or "rho_p3_w4"
  double probability = 0.0;
};

struct WlanResult {
  long long generated_packets = 0;
  long long delivered_packets = 0;
  long long dropped_packets = 0;
  long long residual_packets = 0;  // buffered + in flight at the end
  long long generated_bits = 0;
  long long delivered_bits = 0;  // acknowledged
  std::vector<double> delays_s;  // per delivered packet, arrival to ACK
  std::vector<IterationRecord> iterations;

  friend bool operator==(const WlanResult&, const WlanResult&) = default;
};

struct SimulationResult {
  double t_obs_s = 0.0;
  std::vector<WlanResult> wlans;
  std::vector<SwitchEvent> switches;
  std::vector<DecisionRow> decisions;    // only when collect_decisions
  std::vector<OccupancyRow> occupancy;   // only when collect_occupancy
};

// Throws std::invalid_argument describing the first problem found: invalid
// allocations, non-positive loads, links that cannot sustain MCS 0 at an
// allowed width, or inconsistent parameters.
void validate_for_run(const Scenario& scenario, const SimParams& params);

// Runs one deterministic discrete-event simulation. Identical
// (scenario, params, seed) yield identical results. Node RNG streams are
// derived from (seed, node, purpose), so the traffic of one node does not
// depend on the scheme or behaviour of another.
SimulationResult run_simulation(const Scenario& scenario, const SimParams& params,
                                std::uint64_t seed);

// --- spectrum helpers (also used directly by tests) ---

struct ActiveTx {
  Vec2 source;
  ChannelSet channels;
  int n_c = 1;
  double tx_power_dbm = 15.0;
};

// Aggregate received power on one basic channel: linear-domain sum over the
// active transmissions covering it; -inf dBm when none do.
double power_at_dbm(const Vec2& rx, ChannelId channel, std::span<const ActiveTx> active,
                    const PhyParams& phy, const PathLossFn& path_loss);

// Busy at or above CCA, inclusive.
bool channel_busy(double power_dbm, const PhyParams& phy);

}  // namespace dcbsim
