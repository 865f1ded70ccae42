#include "dcbsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dcbsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t state = a;
  std::uint64_t out = splitmix64(state);
  state ^= b + 0x9E3779B97F4A7C15ull;
  out ^= splitmix64(state);
  state ^= c + 0xC2B2AE3D27D4EB4Full;
  out ^= splitmix64(state);
  state ^= d + 0x165667B19E3779F9ull;
  out ^= splitmix64(state);
  return out;
}

Rng make_stream(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return Rng(mix_seed(a, b, c, d));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_below(Rng& rng, int n) {
  if (n < 1) throw std::invalid_argument("uniform_below needs n >= 1");
  int v = static_cast<int>(uniform01(rng) * n);
  return v < n ? v : n - 1;
}

double exponential(Rng& rng, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential mean must be positive");
  // Inverse CDF on a 53-bit uniform; log1p keeps small draws accurate.
  return -mean * std::log1p(-uniform01(rng));
}

}  // namespace dcbsim
