#pragma once

#include "dcbsim/types.hpp"

namespace dcbsim {

// The aligned block of n_c channels containing primary p. n_c must be one of
// kWidths; throws std::invalid_argument("width not in channelization")
// otherwise.
ChannelSet tx_channel_set(ChannelId p, int n_c);

// All widths n_c whose block around p fits inside the allocation, ascending.
// Throws std::invalid_argument when p is not an allocated channel.
std::vector<int> allowed_widths(ChannelId p, const Allocation& alloc);

// Widest n_c whose block around p is entirely free and inside the allocation.
// Throws std::runtime_error("primary busy") when p itself is not free.
int widest_available(ChannelId p, ChannelSet free, const Allocation& alloc);

}  // namespace dcbsim
