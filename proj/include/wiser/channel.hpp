#pragma once

#include <filesystem>
#include <vector>

#include "wiser/types.hpp"

namespace wiser {

/// Complex uplink channels between every station and the AP, for every RU
/// and slot, plus the station positions they were drawn from.
///
/// Slot t stores an M x (N*R) matrix whose column i*R + l is the length-M
/// channel vector of station i on RU l.
struct ChannelRealization {
  WlanConfig config;
  std::vector<ComplexMatrix> h;           ///< one M x (N*R) matrix per slot
  std::vector<Eigen::Matrix2Xd> positions;  ///< one 2 x N matrix per slot, AP at origin

  int n_slots() const { return static_cast<int>(h.size()); }

  Eigen::Ref<const ComplexVector> channel(int slot, int station, int ru) const {
    return h[slot].col(station * config.n_rus + ru);
  }
  Eigen::Vector2d position(int slot, int station) const {
    return positions[slot].col(station);
  }
  double distance(int slot, int station) const {
    return positions[slot].col(station).norm();
  }
};

/// Draws a full seeded realization: per slot, stations are re-placed
/// uniformly in the cell disk, then per-station tap gains are drawn from an
/// exponential power-delay profile and evaluated at each RU's center
/// frequency. Identical (config, seed) gives an identical realization.
ChannelRealization generate_channels(const WlanConfig& config);

/// Frobenius gains zeta_{i,l} = ||h_{i,l}|| for one slot.
GainMatrix compute_gains(const ChannelRealization& chan, int slot);

/// Distance-dependent average power factor of the model (path loss,
/// clamped at the 1 m reference distance).
double path_gain(double distance_m, const WlanConfig& config);

/// Binary trace file ("WISR" magic, little-endian), lossless.
void write_trace(const ChannelRealization& chan, const std::filesystem::path& file);
ChannelRealization read_trace(const std::filesystem::path& file);

/// Lossless structured-text (JSON) export, one record per slot.
void export_trace_text(const ChannelRealization& chan, const std::filesystem::path& file);

}  // namespace wiser
