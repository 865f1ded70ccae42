#include "dcbsim/types.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcbsim {

int width_index(int n_c) {
  switch (n_c) {
    case 1: return 0;
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
  }
  throw std::invalid_argument("width not in channelization: " + std::to_string(n_c));
}

ChannelSet ChannelSet::of(std::initializer_list<int> channels) {
  ChannelSet s;
  for (int c : channels) s.set(c);
  return s;
}

ChannelSet ChannelSet::block(int first, int size) {
  if (first < 1 || size < 1 || first + size - 1 > kNumChannels)
    throw std::invalid_argument("channel block out of range");
  ChannelSet s;
  s.mask = static_cast<std::uint8_t>(((1u << size) - 1u) << (first - 1));
  return s;
}

ChannelSet ChannelSet::all() {
  ChannelSet s;
  s.mask = 0xFF;
  return s;
}

bool ChannelSet::test(int channel) const {
  if (channel < 1 || channel > kNumChannels) return false;
  return (mask >> (channel - 1)) & 1u;
}

void ChannelSet::set(int channel) {
  if (channel < 1 || channel > kNumChannels)
    throw std::invalid_argument("channel index out of range: " + std::to_string(channel));
  mask |= static_cast<std::uint8_t>(1u << (channel - 1));
}

int ChannelSet::count() const { return std::popcount(mask); }

bool ChannelSet::covers(ChannelSet other) const { return (other.mask & ~mask) == 0; }

std::vector<int> ChannelSet::channels() const {
  std::vector<int> out;
  for (int c = 1; c <= kNumChannels; ++c)
    if (test(c)) out.push_back(c);
  return out;
}

bool is_valid_block(ChannelSet set) {
  int n = set.count();
  if (n != 1 && n != 2 && n != 4 && n != 8) return false;
  int start = std::countr_zero(static_cast<unsigned>(set.mask));  // 0-based
  if (start % n != 0) return false;
  return set == ChannelSet::block(start + 1, n);
}

void validate_allocation(const Allocation& alloc) {
  if (!is_valid_block(alloc.channels))
    throw std::invalid_argument("allocation is not a valid aligned channel block");
  if (!alloc.channels.test(alloc.primary))
    throw std::invalid_argument("primary channel " + std::to_string(alloc.primary) +
                                " outside allocation");
}

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace dcbsim
