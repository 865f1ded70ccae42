#pragma once

#include <deque>
#include <vector>

#include "dcbsim/rng.hpp"

namespace dcbsim {

struct TrafficParams {
  int packet_bits = 12000;
  int buffer_packets = 150;
  int max_aggregation = 64;
};

struct Packet {
  double arrival_s = 0.0;
  int bits = 0;
};

// Exponential interarrival with mean packet_bits / load_bps seconds.
// Throws std::invalid_argument when load_bps <= 0.
double next_interarrival_s(Rng& rng, double load_bps, const TrafficParams& params);

enum class EnqueueResult { Accepted, Dropped };

// Finite FIFO queue feeding frame aggregation.
class Buffer {
 public:
  explicit Buffer(int capacity_packets);

  EnqueueResult enqueue(const Packet& p);

  // Removes up to max_packets oldest packets. Throws std::runtime_error
  // ("nothing to send") on an empty buffer.
  std::vector<Packet> dequeue_frame(int max_packets);

  // Re-inserts a failed frame's packets at the head, preserving order.
  void push_front(const std::vector<Packet>& packets);

  int size() const { return static_cast<int>(queue_.size()); }
  bool empty() const { return queue_.empty(); }
  long long dropped() const { return dropped_; }
  const std::deque<Packet>& packets() const { return queue_; }

 private:
  std::deque<Packet> queue_;
  int capacity_;
  long long dropped_ = 0;
};

}  // namespace dcbsim
