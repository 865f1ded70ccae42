#include "dcbsim/phy.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dcbsim {

PathLossFn log_distance_path_loss(double l0_db, double exponent) {
  return [l0_db, exponent](double d_m) {
    if (!(d_m > 0.0)) throw std::invalid_argument("path loss needs a positive distance");
    return l0_db + 10.0 * exponent * std::log10(d_m);
  };
}

double dbm_to_mw(double dbm) {
  if (dbm == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

double rx_power_per_channel_dbm(double tx_power_dbm, int n_c, double distance_m,
                                const PhyParams& params, const PathLossFn& path_loss) {
  width_index(n_c);  // validates n_c
  return tx_power_dbm + params.tx_gain_db + params.rx_gain_db - path_loss(distance_m) -
         10.0 * std::log10(static_cast<double>(n_c));
}

double sinr_db(double signal_dbm, std::span<const double> interference_dbm, double noise_dbm) {
  double denom_mw = dbm_to_mw(noise_dbm);
  for (double i : interference_dbm) denom_mw += dbm_to_mw(i);
  return signal_dbm - mw_to_dbm(denom_mw);
}

bool capture_ok(double sinr, const PhyParams& params) {
  return sinr >= params.capture_threshold_db;
}

McsTable McsTable::default_11ax() {
  McsTable t;
  // Required SNR per MCS, identical for every width: the per-channel noise
  // floor is fixed and bonding is accounted for by the transmit-power split.
  constexpr std::array<double, 12> kSnr{13, 16, 18, 21, 25, 29, 30, 31, 36, 38, 41, 43};
  constexpr std::array<std::array<double, 12>, 4> kRateBps{{
      {8.6e6, 17.2e6, 25.8e6, 34.4e6, 51.6e6, 68.8e6, 77.4e6, 86.0e6, 103.2e6, 114.7e6, 129.0e6,
       143.4e6},
      {17.2e6, 34.4e6, 51.6e6, 68.8e6, 103.2e6, 137.6e6, 154.9e6, 172.1e6, 206.5e6, 229.4e6,
       258.1e6, 286.8e6},
      {36.0e6, 72.1e6, 108.1e6, 144.1e6, 216.2e6, 288.2e6, 324.3e6, 360.3e6, 432.4e6, 480.4e6,
       540.4e6, 600.5e6},
      {72.1e6, 144.1e6, 216.2e6, 288.2e6, 432.4e6, 576.5e6, 648.5e6, 720.6e6, 864.7e6, 960.8e6,
       1080.9e6, 1201.0e6},
  }};
  for (int w = 0; w < 4; ++w) {
    for (int m = 0; m <= kMaxMcs; ++m) {
      t.min_snr_[w][m] = kSnr[m];
      t.rate_[w][m] = kRateBps[w][m];
    }
  }
  t.validate();
  return t;
}

McsTable McsTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MCS table: " + path);
  McsTable t;
  std::array<std::array<bool, kMaxMcs + 1>, 4> seen{};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find("n_c") != std::string::npos) continue;  // header
    std::istringstream row(line);
    std::string field;
    double vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(row, field, ','))
        throw std::runtime_error("MCS table " + path + ": line " + std::to_string(lineno) +
                                 ": expected 4 comma-separated fields");
      try {
        vals[i] = std::stod(field);
      } catch (const std::exception&) {
        throw std::runtime_error("MCS table " + path + ": line " + std::to_string(lineno) +
                                 ": bad number '" + field + "'");
      }
    }
    int w = width_index(static_cast<int>(vals[0]));
    int m = static_cast<int>(vals[1]);
    if (m < 0 || m > kMaxMcs)
      throw std::runtime_error("MCS table " + path + ": line " + std::to_string(lineno) +
                               ": mcs out of range");
    t.min_snr_[w][m] = vals[2];
    t.rate_[w][m] = vals[3];
    seen[w][m] = true;
  }
  for (int w = 0; w < 4; ++w)
    for (int m = 0; m <= kMaxMcs; ++m)
      if (!seen[w][m])
        throw std::runtime_error("MCS table " + path + ": missing entry for width " +
                                 std::to_string(kWidths[w]) + " mcs " + std::to_string(m));
  t.validate();
  return t;
}

std::optional<int> McsTable::select_mcs(double snr_db, int n_c) const {
  int w = width_index(n_c);
  for (int m = kMaxMcs; m >= 0; --m)
    if (snr_db >= min_snr_[w][m]) return m;
  return std::nullopt;
}

double McsTable::rate_bps(int mcs, int n_c) const {
  int w = width_index(n_c);
  if (mcs < 0 || mcs > kMaxMcs) throw std::out_of_range("mcs out of range");
  return rate_[w][mcs];
}

double McsTable::min_snr_db(int mcs, int n_c) const {
  int w = width_index(n_c);
  if (mcs < 0 || mcs > kMaxMcs) throw std::out_of_range("mcs out of range");
  return min_snr_[w][mcs];
}

void McsTable::validate() const {
  for (int w = 0; w < 4; ++w) {
    for (int m = 0; m <= kMaxMcs; ++m) {
      if (!(rate_[w][m] > 0)) throw std::invalid_argument("MCS table: non-positive rate");
      if (m > 0 && !(rate_[w][m] > rate_[w][m - 1]))
        throw std::invalid_argument("MCS table: rates must increase with mcs");
      if (m > 0 && min_snr_[w][m] < min_snr_[w][m - 1])
        throw std::invalid_argument("MCS table: thresholds must be non-decreasing with mcs");
      if (w > 0 && !(rate_[w][m] > rate_[w - 1][m]))
        throw std::invalid_argument("MCS table: rates must increase with width");
    }
  }
}

}  // namespace dcbsim
