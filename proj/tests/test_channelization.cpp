#include "dcbsim/channelization.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace dcbsim;

namespace {

// Brute-force reference: enumerate every aligned block in the channelization
// and pick the largest one containing p that fits in both sets. Returns 0
// when the primary itself is busy.
int widest_by_enumeration(ChannelId p, ChannelSet free, ChannelSet alloc) {
  if (!free.test(p)) return 0;
  int best = 0;
  for (int size : kWidths)
    for (int start = 1; start + size - 1 <= kNumChannels; start += size) {
      ChannelSet block = ChannelSet::block(start, size);
      if (!block.test(p)) continue;
      if (!alloc.covers(block) || !free.covers(block)) continue;
      best = std::max(best, size);
    }
  return best;
}

}  // namespace

TEST_CASE("tx_channel_set basic lookups") {
  CHECK(tx_channel_set(6, 2) == ChannelSet::of({5, 6}));
  CHECK(tx_channel_set(3, 1) == ChannelSet::of({3}));
  CHECK(tx_channel_set(6, 8) == ChannelSet::all());
  CHECK(tx_channel_set(1, 4) == ChannelSet::of({1, 2, 3, 4}));
  CHECK(tx_channel_set(5, 4) == ChannelSet::of({5, 6, 7, 8}));
  CHECK_THROWS_AS(tx_channel_set(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(tx_channel_set(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tx_channel_set(9, 1), std::invalid_argument);
}

TEST_CASE("tx_channel_set block size, alignment and nesting") {
  for (int p = 1; p <= kNumChannels; ++p) {
    ChannelSet previous;
    for (int n_c : kWidths) {
      ChannelSet block = tx_channel_set(p, n_c);
      CHECK(block.count() == n_c);
      CHECK(block.test(p));
      int start = block.channels().front();
      CHECK((start - 1) % n_c == 0);
      if (!previous.empty()) CHECK(block.covers(previous));  // nesting
      previous = block;
    }
  }
}

TEST_CASE("allowed_widths restricted by the allocation") {
  Allocation half{ChannelSet::of({1, 2, 3, 4}), 2};
  CHECK(allowed_widths(2, half) == std::vector<int>{1, 2, 4});

  Allocation full{ChannelSet::all(), 5};
  CHECK(allowed_widths(5, full) == std::vector<int>{1, 2, 4, 8});

  Allocation single{ChannelSet::of({7}), 7};
  CHECK(allowed_widths(7, single) == std::vector<int>{1});

  CHECK_THROWS_AS(allowed_widths(5, half), std::invalid_argument);
}

TEST_CASE("widest_available picks the largest free block") {
  Allocation full{ChannelSet::all(), 1};
  CHECK(widest_available(1, ChannelSet::of({1, 2}), full) == 2);
  CHECK(widest_available(1, ChannelSet::all(), full) == 8);
  // {1,2,3} free: the 4-wide block {1,2,3,4} is not contained, so 40 MHz.
  CHECK(widest_available(1, ChannelSet::of({1, 2, 3}), full) ==
        widest_by_enumeration(1, ChannelSet::of({1, 2, 3}), ChannelSet::all()));
  CHECK(widest_available(1, ChannelSet::of({1, 2, 3}), full) == 2);
  CHECK_THROWS_AS(widest_available(4, ChannelSet::of({1, 2, 3}), full), std::runtime_error);
}

TEST_CASE("widest_available agrees with exhaustive enumeration") {
  for (int mask = 0; mask < 256; ++mask) {
    ChannelSet free;
    free.mask = static_cast<std::uint8_t>(mask);
    for (int p = 1; p <= kNumChannels; ++p) {
      for (int alloc_size : kWidths) {
        ChannelSet alloc_set = tx_channel_set(p, alloc_size);
        Allocation alloc{alloc_set, p};
        int expected = widest_by_enumeration(p, free, alloc_set);
        if (expected == 0) {
          CHECK_THROWS_AS(widest_available(p, free, alloc), std::runtime_error);
        } else {
          CHECK(widest_available(p, free, alloc) == expected);
        }
      }
    }
  }
}

TEST_CASE("allocation validation") {
  CHECK_THROWS_AS(validate_allocation({ChannelSet::of({2, 3}), 2}), std::invalid_argument);
  CHECK_THROWS_AS(validate_allocation({ChannelSet::of({1, 2, 3}), 2}), std::invalid_argument);
  CHECK_THROWS_AS(validate_allocation({ChannelSet::of({1, 2}), 3}), std::invalid_argument);
  CHECK_NOTHROW(validate_allocation({ChannelSet::of({5, 6, 7, 8}), 6}));
}
