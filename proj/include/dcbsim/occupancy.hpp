#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dcbsim/types.hpp"

namespace dcbsim {

struct OccupancySample {
  double t = 0.0;
  std::uint8_t free_mask = 0;  // bit (c-1) set iff channel c measured below CCA
};

// Empirical free probabilities over one iteration: per-channel counts and
// per-(primary, width) bond counts. Counts are kept as integers so the
// derived probabilities are exact ratios of the same sample total.
struct OccupancyStats {
  int total = 0;
  std::array<int, kNumChannels> free_count{};
  // [p-1][width_index]; only (p, width) pairs inside the allocation are
  // populated, everything else stays 0.
  std::array<std::array<int, 4>, kNumChannels> bond_count{};

  bool no_data() const { return total == 0; }
  double pi(ChannelId c) const;
  double rho(ChannelId p, int n_c) const;
};

// Per-iteration sample store. Samples are masked to the allocated channels
// (anything else is unknown and recorded busy); bond counters are updated
// incrementally on every sample.
class OccupancySamples {
 public:
  explicit OccupancySamples(const Allocation& alloc);

  void record(double t, std::uint8_t free_mask);
  void clear();

  int count() const { return total_; }
  const std::vector<OccupancySample>& raw() const { return raw_; }
  OccupancyStats stats() const;

 private:
  struct Bond {
    int p;
    int width_index;
    std::uint8_t mask;
  };

  std::uint8_t alloc_mask_ = 0;
  std::vector<Bond> bonds_;
  std::array<int, kNumChannels> free_count_{};
  std::array<std::array<int, 4>, kNumChannels> bond_count_{};
  std::vector<OccupancySample> raw_;
  int total_ = 0;
};

}  // namespace dcbsim
