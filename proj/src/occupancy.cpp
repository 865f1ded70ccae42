#include "dcbsim/occupancy.hpp"

#include "dcbsim/channelization.hpp"

namespace dcbsim {

double OccupancyStats::pi(ChannelId c) const {
  if (total == 0) return 0.0;
  return static_cast<double>(free_count[c - 1]) / total;
}

double OccupancyStats::rho(ChannelId p, int n_c) const {
  if (total == 0) return 0.0;
  return static_cast<double>(bond_count[p - 1][width_index(n_c)]) / total;
}

OccupancySamples::OccupancySamples(const Allocation& alloc) {
  validate_allocation(alloc);
  alloc_mask_ = alloc.channels.mask;
  for (int p : alloc.channels.channels())
    for (int n_c : allowed_widths(p, alloc))
      bonds_.push_back({p, width_index(n_c), tx_channel_set(p, n_c).mask});
}

void OccupancySamples::record(double t, std::uint8_t free_mask) {
  std::uint8_t masked = static_cast<std::uint8_t>(free_mask & alloc_mask_);
  raw_.push_back({t, masked});
  ++total_;
  for (int c = 0; c < kNumChannels; ++c)
    if ((masked >> c) & 1u) ++free_count_[c];
  for (const Bond& b : bonds_)
    if ((masked & b.mask) == b.mask) ++bond_count_[b.p - 1][b.width_index];
}

void OccupancySamples::clear() {
  raw_.clear();
  total_ = 0;
  free_count_ = {};
  bond_count_ = {};
}

OccupancyStats OccupancySamples::stats() const {
  OccupancyStats s;
  s.total = total_;
  s.free_count = free_count_;
  s.bond_count = bond_count_;
  return s;
}

}  // namespace dcbsim
