#include "dcbsim/traffic.hpp"

#include <stdexcept>

namespace dcbsim {

double next_interarrival_s(Rng& rng, double load_bps, const TrafficParams& params) {
  if (!(load_bps > 0.0)) throw std::invalid_argument("traffic load must be positive");
  return exponential(rng, static_cast<double>(params.packet_bits) / load_bps);
}

Buffer::Buffer(int capacity_packets) : capacity_(capacity_packets) {
  if (capacity_ < 1) throw std::invalid_argument("buffer capacity must be positive");
}

EnqueueResult Buffer::enqueue(const Packet& p) {
  if (static_cast<int>(queue_.size()) >= capacity_) {
    ++dropped_;
    return EnqueueResult::Dropped;
  }
  queue_.push_back(p);
  return EnqueueResult::Accepted;
}

std::vector<Packet> Buffer::dequeue_frame(int max_packets) {
  if (queue_.empty()) throw std::runtime_error("nothing to send");
  int n = std::min<int>(max_packets, static_cast<int>(queue_.size()));
  std::vector<Packet> out(queue_.begin(), queue_.begin() + n);
  queue_.erase(queue_.begin(), queue_.begin() + n);
  return out;
}

void Buffer::push_front(const std::vector<Packet>& packets) {
  queue_.insert(queue_.begin(), packets.begin(), packets.end());
}

}  // namespace dcbsim
