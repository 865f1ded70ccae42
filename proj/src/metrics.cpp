#include "dcbsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dcbsim {

double throughput_bps(const SimulationResult& result, int wlan) {
  if (!(result.t_obs_s > 0)) throw std::invalid_argument("t_obs must be positive");
  return static_cast<double>(result.wlans.at(wlan).delivered_bits) / result.t_obs_s;
}

namespace {

// Linearly interpolated quantile over a sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  double h = q * (sorted.size() - 1);
  size_t lo = static_cast<size_t>(h);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::optional<DelayStats> delay_stats(const SimulationResult& result, int wlan) {
  const std::vector<double>& delays = result.wlans.at(wlan).delays_s;
  if (delays.empty()) return std::nullopt;
  std::vector<double> sorted = delays;
  std::sort(sorted.begin(), sorted.end());
  DelayStats s;
  s.n = static_cast<int>(sorted.size());
  s.mean_s = std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
  s.p5 = quantile(sorted, 0.05);
  s.p25 = quantile(sorted, 0.25);
  s.p50 = quantile(sorted, 0.50);
  s.p75 = quantile(sorted, 0.75);
  s.p95 = quantile(sorted, 0.95);
  return s;
}

std::optional<int> first_satisfied_iteration(const SimulationResult& result, int wlan) {
  const auto& iters = result.wlans.at(wlan).iterations;
  for (size_t i = 0; i < iters.size(); ++i)
    if (iters[i].satisfied) return static_cast<int>(i) + 1;
  return std::nullopt;
}

double satisfaction_probability(const std::vector<double>& s_mean_bps, double load_bps,
                                double eps) {
  if (s_mean_bps.empty()) throw std::invalid_argument("no runs");
  if (!(eps >= 0 && eps < 1)) throw std::invalid_argument("eps must be in [0, 1)");
  double threshold = (1.0 - eps) * load_bps;
  long long hits = std::count_if(s_mean_bps.begin(), s_mean_bps.end(),
                                 [threshold](double s) { return s >= threshold; });
  return static_cast<double>(hits) / s_mean_bps.size();
}

std::vector<double> iterations_to_satisfaction_cdf(
    const std::vector<std::optional<int>>& first_satisfied, int max_k) {
  if (max_k < 1) throw std::invalid_argument("max_k must be positive");
  std::vector<double> cdf(max_k, 0.0);
  if (first_satisfied.empty()) return cdf;
  for (int k = 1; k <= max_k; ++k) {
    long long hits = std::count_if(first_satisfied.begin(), first_satisfied.end(),
                                   [k](const std::optional<int>& f) { return f && *f <= k; });
    cdf[k - 1] = static_cast<double>(hits) / first_satisfied.size();
  }
  return cdf;
}

}  // namespace dcbsim
