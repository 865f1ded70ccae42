#include "dcbsim/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dcbsim/channelization.hpp"

namespace dcbsim {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::FP: return "FP";
    case Scheme::DR: return "DR";
    case Scheme::DF: return "DF";
    case Scheme::DW: return "DW";
  }
  throw std::invalid_argument("unknown scheme");
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "FP") return Scheme::FP;
  if (name == "DR") return Scheme::DR;
  if (name == "DF") return Scheme::DF;
  if (name == "DW") return Scheme::DW;
  throw std::invalid_argument("unknown scheme: " + name);
}

bool satisfied(double s_bps, double ell_bps, double eta) { return s_bps >= eta * ell_bps; }

std::vector<double> exclusive_bond_probs(std::span<const double> rho) {
  for (double r : rho)
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rho outside [0, 1]");
  std::vector<double> probs(rho.size(), 0.0);
  // Widest first; every narrower width sheds the probability already taken
  // by the wider bonds it is nested in.
  double wider_sum = 0.0;
  for (int i = static_cast<int>(rho.size()) - 1; i >= 0; --i) {
    double p = rho[i] - wider_sum;
    probs[i] = std::clamp(p, 0.0, 1.0);
    wider_sum += probs[i];
  }
  return probs;
}

std::vector<long long> exclusive_bond_counts(const OccupancyStats& stats, ChannelId p,
                                             std::span<const int> widths) {
  std::vector<long long> counts(widths.size(), 0);
  long long wider = 0;
  for (int i = static_cast<int>(widths.size()) - 1; i >= 0; --i) {
    long long c = stats.bond_count[p - 1][width_index(widths[i])];
    if (c < wider) throw std::logic_error("bond counts violate nesting monotonicity");
    counts[i] = c - wider;
    wider = c;
  }
  return counts;
}

double expected_rate_bps(std::span<const double> probs, std::span<const double> rates_bps) {
  if (probs.size() != rates_bps.size())
    throw std::invalid_argument("probability/rate size mismatch");
  double r = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) r += probs[i] * rates_bps[i];
  return r;
}

namespace {

std::vector<ChannelId> candidate_primaries(const Allocation& alloc, ChannelId current_p) {
  std::vector<ChannelId> out;
  for (int c : alloc.channels.channels())
    if (c != current_p) out.push_back(c);
  return out;
}

}  // namespace

ChannelId select_primary(Scheme scheme, ChannelId current_p, const OccupancyStats& stats,
                         const Allocation& alloc, bool dcb,
                         const std::array<double, 4>& rate_by_width_bps, Rng& rng,
                         SelectionDecision* decision) {
  if (scheme == Scheme::FP) throw std::invalid_argument("FP never reselects the primary");
  std::vector<ChannelId> candidates = candidate_primaries(alloc, current_p);
  if (candidates.empty())
    throw std::invalid_argument("allocation has no alternative primary channel");

  SelectionDecision local;
  SelectionDecision& dec = decision ? *decision : local;
  dec.rhat_valid = false;
  dec.fell_back_to_random = false;

  ChannelId chosen = 0;
  if (scheme == Scheme::DR || stats.no_data()) {
    dec.fell_back_to_random = scheme != Scheme::DR;
    chosen = candidates[uniform_below(rng, static_cast<int>(candidates.size()))];
  } else if (scheme == Scheme::DF) {
    chosen = candidates.front();
    int best = stats.free_count[chosen - 1];
    for (ChannelId c : candidates) {
      if (stats.free_count[c - 1] > best) {
        best = stats.free_count[c - 1];
        chosen = c;
      }
    }
  } else {  // DW
    dec.rhat_valid = true;
    dec.rhat_bps = {};
    std::vector<int> widths;
    if (dcb) {
      for (int w : kWidths)
        if (w <= alloc.channels.count()) widths.push_back(w);
    } else {
      widths = {1};
    }
    double best = -1.0;
    for (ChannelId c : candidates) {
      auto counts = exclusive_bond_counts(stats, c, widths);
      double rhat = 0.0;
      for (size_t i = 0; i < widths.size(); ++i) {
        double prob = static_cast<double>(counts[i]) / stats.total;
        rhat += prob * rate_by_width_bps[width_index(widths[i])];
      }
      dec.rhat_bps[c - 1] = rhat;
      if (rhat > best) {
        best = rhat;
        chosen = c;
      }
    }
  }
  dec.new_primary = chosen;
  return chosen;
}

}  // namespace dcbsim
