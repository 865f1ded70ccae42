#include "dcbsim/traffic.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace dcbsim;

TEST_CASE("interarrival draws have the configured mean") {
  TrafficParams params;  // 12000-bit packets
  Rng rng = make_stream(11);
  // 12 Mbps -> 1 ms between packets on average.
  double sum = 0.0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    double t = next_interarrival_s(rng, 12e6, params);
    CHECK(t > 0.0);
    sum += t;
  }
  double mean = sum / kDraws;
  CHECK(mean == doctest::Approx(1e-3).epsilon(0.01));
  CHECK_THROWS_AS(next_interarrival_s(rng, 0.0, params), std::invalid_argument);
  CHECK_THROWS_AS(next_interarrival_s(rng, -5.0, params), std::invalid_argument);
}

TEST_CASE("buffer accepts to capacity and counts drops") {
  Buffer buf(150);
  for (int i = 0; i < 149; ++i) CHECK(buf.enqueue({i * 1e-3, 12000}) == EnqueueResult::Accepted);
  CHECK(buf.size() == 149);
  CHECK(buf.enqueue({0.2, 12000}) == EnqueueResult::Accepted);  // 150th
  CHECK(buf.enqueue({0.3, 12000}) == EnqueueResult::Dropped);
  CHECK(buf.dropped() == 1);
  CHECK(buf.enqueue({0.4, 12000}) == EnqueueResult::Dropped);
  CHECK(buf.dropped() == 2);
  CHECK(buf.size() == 150);
}

TEST_CASE("dequeue_frame takes the oldest packets in order") {
  Buffer buf(150);
  for (int i = 0; i < 100; ++i) buf.enqueue({i * 1e-3, 12000});
  std::vector<Packet> frame = buf.dequeue_frame(64);
  CHECK(frame.size() == 64);
  CHECK(buf.size() == 36);
  for (size_t i = 1; i < frame.size(); ++i) CHECK(frame[i].arrival_s >= frame[i - 1].arrival_s);
  CHECK(frame.front().arrival_s == 0.0);

  Buffer small(10);
  for (int i = 0; i < 3; ++i) small.enqueue({i * 1e-3, 12000});
  CHECK(small.dequeue_frame(64).size() == 3);
  CHECK(small.empty());
  CHECK_THROWS_WITH_AS(small.dequeue_frame(64), "nothing to send", std::runtime_error);
}

TEST_CASE("push_front restores a failed frame ahead of newer packets") {
  Buffer buf(150);
  for (int i = 0; i < 10; ++i) buf.enqueue({i * 1e-3, 12000});
  std::vector<Packet> frame = buf.dequeue_frame(4);
  buf.enqueue({99.0, 12000});
  buf.push_front(frame);
  std::vector<Packet> again = buf.dequeue_frame(150);
  CHECK(again.size() == 11);
  for (size_t i = 1; i < again.size(); ++i) CHECK(again[i].arrival_s >= again[i - 1].arrival_s);
  CHECK(again.front().arrival_s == 0.0);
}
