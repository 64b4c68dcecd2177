#pragma once

#include <filesystem>

#include "wiser/allocation.hpp"
#include "wiser/channel.hpp"
#include "wiser/types.hpp"

namespace wiser {

/// Piecewise-linear SINR-to-rate map: the achievable spectral efficiency is
/// the minimum over K lines m_k * gamma + b_k, floored at 0 and capped at
/// max_rate for gamma >= gamma_cap. Rates are in bits/s/Hz, gamma is linear.
struct McsTable {
  Eigen::VectorXd m;  ///< line gradients, all >= 0
  Eigen::VectorXd b;  ///< line intercepts
  double gamma_cap = 0.0;
  double max_rate = 0.0;

  int size() const { return static_cast<int>(m.size()); }
  void validate() const;

  /// 13 operating points: chords of the 26-tone 802.11ax MCS0..11
  /// rate-vs-SNR staircase plus the flat cap line.
  static McsTable default_table();
};

McsTable load_mcs_table(const std::filesystem::path& file);
void save_mcs_table(const McsTable& table, const std::filesystem::path& file);

/// Spectral efficiency for one SINR value (bits/s/Hz).
double mcs_rate(double gamma, const McsTable& table);

/// Per-station transmit power over RUs. A station splits its budget
/// equally over its assigned RUs; the last assigned RU takes the exact
/// remainder so each nonzero row sums to total_power exactly.
using PowerAllocation = Eigen::MatrixXd;

PowerAllocation allocate_power(const AssignmentMatrix& assignment, const WlanConfig& config);

/// SINRs and data rates of one evaluated slot. Entries are zero wherever
/// the station is not assigned; rates are in bits/s.
struct LinkMetrics {
  Eigen::MatrixXd sinr;         ///< N x R
  Eigen::MatrixXd rate_per_ru;  ///< N x R, bits/s
  Eigen::VectorXd rate_per_sta; ///< row sums of rate_per_ru

  double rate_sum() const { return rate_per_sta.sum(); }
};

/// Full uplink evaluation of one slot under an assignment: power split,
/// per-RU MMSE decoding of the scheduled group, MCS rate mapping.
LinkMetrics evaluate_slot(const ChannelRealization& chan, int slot,
                          const AssignmentMatrix& assignment, const WlanConfig& config,
                          const McsTable& table);

}  // namespace wiser
