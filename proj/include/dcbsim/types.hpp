#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace dcbsim {

inline constexpr int kNumChannels = 8;

// Allowed bond widths (number of basic 20-MHz channels), ascending.
inline constexpr std::array<int, 4> kWidths{1, 2, 4, 8};

// 1-based index of a basic 20-MHz channel.
using ChannelId = int;

// Index of a width within kWidths. Throws std::invalid_argument for anything
// that is not 1, 2, 4 or 8.
int width_index(int n_c);

// Set of basic channels as a bitmask; bit (c-1) represents channel c.
struct ChannelSet {
  std::uint8_t mask = 0;

  static ChannelSet of(std::initializer_list<int> channels);
  static ChannelSet block(int first, int size);  // channels [first, first+size)
  static ChannelSet all();

  bool test(int channel) const;
  void set(int channel);
  int count() const;
  bool covers(ChannelSet other) const;  // other is a subset of this
  bool empty() const { return mask == 0; }
  std::vector<int> channels() const;

  friend bool operator==(ChannelSet a, ChannelSet b) { return a.mask == b.mask; }
};

// True when the set is one of the 15 valid transmission blocks: a contiguous
// run of 1, 2, 4 or 8 channels whose start offset is a multiple of its size.
bool is_valid_block(ChannelSet set);

// A WLAN's allocated channels plus the primary it currently anchors on.
struct Allocation {
  ChannelSet channels;
  ChannelId primary = 1;

  friend bool operator==(const Allocation& a, const Allocation& b) {
    return a.channels == b.channels && a.primary == b.primary;
  }
};

// Throws std::invalid_argument when the allocation is not a valid aligned
// block or the primary lies outside it.
void validate_allocation(const Allocation& alloc);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
};

double distance(const Vec2& a, const Vec2& b);

}  // namespace dcbsim
