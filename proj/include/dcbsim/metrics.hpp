#pragma once

#include <optional>
#include <vector>

#include "dcbsim/engine.hpp"

namespace dcbsim {

// Acknowledged bits divided by the observation time.
double throughput_bps(const SimulationResult& result, int wlan);

struct DelayStats {
  double mean_s = 0.0;
  double p5 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0;
  int n = 0;
};

// Mean and quantiles over delivered-packet delays; nullopt when nothing was
// delivered (delay undefined).
std::optional<DelayStats> delay_stats(const SimulationResult& result, int wlan);

// 1-based index of the first satisfied iteration, nullopt when none.
std::optional<int> first_satisfied_iteration(const SimulationResult& result, int wlan);

// Fraction of runs whose mean throughput reached (1 - eps) * load, inclusive.
// Throws std::invalid_argument("no runs") on an empty list.
double satisfaction_probability(const std::vector<double>& s_mean_bps, double load_bps,
                                double eps = 0.05);

// CDF over k = 1..max_k of the first satisfied iteration; runs that never
// satisfy contribute to no k, so the curve can plateau below 1.
std::vector<double> iterations_to_satisfaction_cdf(
    const std::vector<std::optional<int>>& first_satisfied, int max_k);

}  // namespace dcbsim
