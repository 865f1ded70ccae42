#pragma once

#include <cstdint>
#include <random>

namespace dcbsim {

// All randomness flows through mt19937_64 streams derived from explicit
// (seed, purpose) tuples. The raw generator output is specified by the
// standard, and the transforms below are our own, so identical seeds give
// identical draws on every platform and standard library.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state);

// Hashes up to four words into one stream seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                       std::uint64_t d = 0);

Rng make_stream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0, std::uint64_t d = 0);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, n); n >= 1.
int uniform_below(Rng& rng, int n);

// Exponential draw with the given mean (> 0).
double exponential(Rng& rng, double mean);

}  // namespace dcbsim
