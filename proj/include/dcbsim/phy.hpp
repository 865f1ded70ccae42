#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "dcbsim/types.hpp"

namespace dcbsim {

struct PhyParams {
  double center_freq_hz = 5.25e9;
  double tx_power_dbm = 15.0;
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double cca_dbm = -82.0;             // busy at or above this, all channels
  double capture_threshold_db = 20.0;  // minimum SINR for reception
  double noise_dbm = -95.0;            // per basic channel
  double basic_channel_hz = 20e6;
};

// Path loss in dB as a function of distance in meters. Pluggable so the
// propagation model can be swapped without touching anything else.
using PathLossFn = std::function<double(double)>;

// PL(d) = l0 + 10 * exponent * log10(d). Throws on d <= 0. The shipped
// defaults are a calibration for indoor 5 GHz links: 1-5 m links hold high
// MCS while wide bonds from across a 40x40 m area can drop below CCA.
PathLossFn log_distance_path_loss(double l0_db = 54.12, double exponent = 2.06);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Received power on each basic channel of an n_c-wide transmission: the
// transmit power is split evenly across the bonded channels.
double rx_power_per_channel_dbm(double tx_power_dbm, int n_c, double distance_m,
                                const PhyParams& params, const PathLossFn& path_loss);

// signal - 10*log10(sum of interferers + noise), summed in milliwatts.
double sinr_db(double signal_dbm, std::span<const double> interference_dbm, double noise_dbm);

// Reception succeeds iff the SINR meets the capture threshold (inclusive).
bool capture_ok(double sinr, const PhyParams& params);

// Minimum-SNR thresholds and data rates per (width, MCS 0..11).
class McsTable {
 public:
  static constexpr int kMaxMcs = 11;

  // Single spatial stream, 0.8 us guard interval.
  static McsTable default_11ax();

  // CSV columns: n_c,mcs,min_snr_db,rate_bps. All 4x12 entries required.
  static McsTable load_csv(const std::string& path);

  // Highest MCS whose threshold is <= snr (inclusive); nullopt below MCS 0.
  std::optional<int> select_mcs(double snr_db, int n_c) const;

  double rate_bps(int mcs, int n_c) const;     // throws std::out_of_range
  double min_snr_db(int mcs, int n_c) const;   // throws std::out_of_range

  // Enforces rate/threshold monotonicity; throws std::invalid_argument.
  void validate() const;

 private:
  std::array<std::array<double, kMaxMcs + 1>, 4> min_snr_{};  // [width_index][mcs]
  std::array<std::array<double, kMaxMcs + 1>, 4> rate_{};
};

}  // namespace dcbsim
