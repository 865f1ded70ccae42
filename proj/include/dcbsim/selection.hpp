#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcbsim/occupancy.hpp"
#include "dcbsim/rng.hpp"
#include "dcbsim/types.hpp"

namespace dcbsim {

// FP: fixed primary. DR: uniform random among the other allocated channels.
// DF: most-free channel. DW: highest expected rate over the possible bonds.
enum class Scheme { FP, DR, DF, DW };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct SelectionConfig {
  Scheme scheme = Scheme::FP;
  double eta = 0.9;            // satisfaction ratio
  double iteration_s = 1.0;
  double switch_delay_s = 0.0;
};

// s >= eta * ell, inclusive. An idle iteration (0 >= 0) is satisfied.
bool satisfied(double s_bps, double ell_bps, double eta);

// Probability of transmitting at exactly each width, from the probability
// that each width's bond was free. rho is indexed by ascending widths; each
// entry must be in [0, 1] (throws std::invalid_argument otherwise) and is
// expected to be nesting-monotone (non-increasing). Results are clamped to
// [0, 1]; with monotone input the clamp only absorbs rounding noise.
std::vector<double> exclusive_bond_probs(std::span<const double> rho);

// Integer-count version of the same decomposition, exact by construction:
// the count for width w equals the number of samples whose widest free bond
// anchored at p was exactly w. widths must be ascending.
std::vector<long long> exclusive_bond_counts(const OccupancyStats& stats, ChannelId p,
                                             std::span<const int> widths);

// Expected rate: dot product of per-width transmit probabilities and rates.
double expected_rate_bps(std::span<const double> probs, std::span<const double> rates_bps);

struct SelectionDecision {
  ChannelId new_primary = 0;
  std::array<double, kNumChannels> rhat_bps{};  // per candidate primary (DW only)
  bool rhat_valid = false;
  bool fell_back_to_random = false;  // stats had no data
};

// Picks the next primary for an unsatisfied iteration; never returns
// current_p. Ties in DF/DW break toward the lowest channel index. With empty
// stats every scheme falls back to a uniform random pick. rate_by_width_bps
// is indexed like kWidths; single-channel nodes only ever use width 1.
// Throws std::invalid_argument when the allocation has no alternative
// channel or scheme is FP.
ChannelId select_primary(Scheme scheme, ChannelId current_p, const OccupancyStats& stats,
                         const Allocation& alloc, bool dcb,
                         const std::array<double, 4>& rate_by_width_bps, Rng& rng,
                         SelectionDecision* decision = nullptr);

}  // namespace dcbsim
