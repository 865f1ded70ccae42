#include "dcbsim/mac.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dcbsim {

int draw_backoff(int stage, Rng& rng, const MacParams& params) {
  if (stage < 0 || stage > params.max_stage)
    throw std::out_of_range("backoff stage out of range: " + std::to_string(stage));
  int cw = params.cw_min << stage;
  // cw_min is a power of two, so masking gives an unbiased draw.
  if ((cw & (cw - 1)) == 0) return static_cast<int>(rng() & static_cast<unsigned>(cw - 1));
  return uniform_below(rng, cw);
}

double frame_duration_s(int n_agg, int packet_bits, double rate_bps, const MacParams& params) {
  if (n_agg < 1) throw std::invalid_argument("frame needs at least one packet");
  if (!(rate_bps > 0.0)) throw std::invalid_argument("rate must be positive");
  double payload_bits = static_cast<double>(n_agg) * (packet_bits + params.mpdu_header_bits);
  double symbols = std::ceil(payload_bits / rate_bps / params.symbol_s - 1e-9);
  if (symbols < 1.0) symbols = 1.0;
  return params.phy_header_s + symbols * params.symbol_s + params.sifs_s + params.ack_s;
}

void ChannelActivity::set(bool now_busy, double now) {
  if (now_busy == busy) return;
  prev_since = since;
  since = now;
  busy = now_busy;
}

bool ChannelActivity::idle_throughout(double from, double now) const {
  if (!busy) return since <= from;
  // Busy that began exactly at `now` does not cover the half-open window;
  // the preceding idle period must reach back to `from`.
  return since >= now && prev_since <= from;
}

ChannelSet pifs_assessment(const std::array<ChannelActivity, kNumChannels>& activity, double now,
                           ChannelId p, const Allocation& alloc, const MacParams& params) {
  double from = now - params.pifs_s;
  ChannelSet clear;
  for (int c : alloc.channels.channels())
    if (activity[c - 1].idle_throughout(from, now)) clear.set(c);
  if (!clear.test(p)) throw std::logic_error("PIFS window violated on the primary channel");
  return clear;
}

Frame build_frame(int buffered_packets, ChannelId p, ChannelSet free, const Allocation& alloc,
                  bool dcb, const std::array<double, 4>& snr_by_width_db, const McsTable& mcs,
                  const TrafficParams& traffic, const MacParams& params) {
  if (buffered_packets < 1) throw std::runtime_error("nothing to send");
  Frame f;
  f.n_c = dcb ? widest_available(p, free, alloc) : 1;
  if (!dcb && !free.test(p)) throw std::runtime_error("primary busy");
  f.channels = tx_channel_set(p, f.n_c);
  auto m = mcs.select_mcs(snr_by_width_db[width_index(f.n_c)], f.n_c);
  if (!m) throw std::runtime_error("link cannot sustain mcs 0 at width " + std::to_string(f.n_c));
  f.mcs = *m;
  f.rate_bps = mcs.rate_bps(f.mcs, f.n_c);
  f.n_agg = std::min(buffered_packets, traffic.max_aggregation);
  f.duration_s = frame_duration_s(f.n_agg, traffic.packet_bits, f.rate_bps, params);
  return f;
}

}  // namespace dcbsim
