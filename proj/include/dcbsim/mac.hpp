#pragma once

#include <array>

#include "dcbsim/channelization.hpp"
#include "dcbsim/phy.hpp"
#include "dcbsim/rng.hpp"
#include "dcbsim/traffic.hpp"
#include "dcbsim/types.hpp"

namespace dcbsim {

struct MacParams {
  int cw_min = 16;
  int max_stage = 5;
  double slot_s = 9e-6;
  double sifs_s = 16e-6;
  double difs_s = 34e-6;  // SIFS + 2 slots
  double pifs_s = 25e-6;  // SIFS + 1 slot
  // Fixed framing overheads for the airtime model.
  double phy_header_s = 40e-6;
  double ack_s = 32e-6;
  double symbol_s = 13.6e-6;
  int mpdu_header_bits = 320;
};

// Uniform draw in [0, cw_min * 2^stage - 1]. Stage must be in [0, max_stage];
// out of range throws std::out_of_range.
int draw_backoff(int stage, Rng& rng, const MacParams& params);

// Airtime of a frame carrying n_agg packets at the given rate:
// preamble + payload rounded up to OFDM symbols + SIFS + ACK.
double frame_duration_s(int n_agg, int packet_bits, double rate_bps, const MacParams& params);

// Busy/idle history of one basic channel as seen by one node. Tracks the
// current state, when it began, and when the previous state began, which is
// exactly enough to answer PIFS-window queries with half-open semantics:
// a transmission starting at `now` does not occupy [now - PIFS, now).
struct ChannelActivity {
  bool busy = false;
  double since = 0.0;
  double prev_since = 0.0;

  void set(bool now_busy, double now);
  bool idle_throughout(double from, double now) const;
};

// Channels of the allocation that stayed below CCA for the whole
// [now - PIFS, now) window. The primary must qualify (it has been idle for
// at least DIFS before any backoff expiry); throws std::logic_error if not.
ChannelSet pifs_assessment(const std::array<ChannelActivity, kNumChannels>& activity, double now,
                           ChannelId p, const Allocation& alloc, const MacParams& params);

struct Frame {
  ChannelSet channels;
  int n_c = 1;
  int n_agg = 0;
  int mcs = 0;
  double rate_bps = 0.0;
  double duration_s = 0.0;
};

// Assembles the widest frame the free set allows (always width 1 for
// single-channel nodes). snr_by_width_db is the noise-only link budget at the
// receiver, indexed like kWidths. Throws std::runtime_error when the link
// cannot sustain MCS 0 at the chosen width.
Frame build_frame(int buffered_packets, ChannelId p, ChannelSet free, const Allocation& alloc,
                  bool dcb, const std::array<double, 4>& snr_by_width_db, const McsTable& mcs,
                  const TrafficParams& traffic, const MacParams& params);

enum class Phase { Idle, WaitDifs, Counting, Transmitting, Switching };

struct MacState {
  Phase phase = Phase::Idle;
  int stage = 0;
  int remaining_slots = 0;
};

}  // namespace dcbsim
