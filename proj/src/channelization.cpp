#include "dcbsim/channelization.hpp"

#include <stdexcept>
#include <string>

namespace dcbsim {

ChannelSet tx_channel_set(ChannelId p, int n_c) {
  if (p < 1 || p > kNumChannels)
    throw std::invalid_argument("primary channel out of range: " + std::to_string(p));
  width_index(n_c);  // validates n_c
  int start = ((p - 1) / n_c) * n_c + 1;
  return ChannelSet::block(start, n_c);
}

std::vector<int> allowed_widths(ChannelId p, const Allocation& alloc) {
  validate_allocation(alloc);
  if (!alloc.channels.test(p))
    throw std::invalid_argument("channel " + std::to_string(p) + " outside allocation");
  std::vector<int> widths;
  for (int n_c : kWidths)
    if (alloc.channels.covers(tx_channel_set(p, n_c))) widths.push_back(n_c);
  return widths;
}

int widest_available(ChannelId p, ChannelSet free, const Allocation& alloc) {
  if (!free.test(p)) throw std::runtime_error("primary busy");
  int best = 0;
  for (int n_c : allowed_widths(p, alloc))
    if (free.covers(tx_channel_set(p, n_c))) best = n_c;
  return best;  // >= 1: the width-1 block is the free primary itself
}

}  // namespace dcbsim
