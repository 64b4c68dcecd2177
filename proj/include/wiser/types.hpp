#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wiser {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Per-slot channel gain magnitudes, stations x RUs.
using GainMatrix = Eigen::MatrixXd;

/// Binary RU assignment, stations x RUs, entries in {0,1}.
using AssignmentMatrix = Eigen::MatrixXi;

/// Per-RU MU-MIMO group sizes (column sums of an AssignmentMatrix).
using GroupSizes = Eigen::VectorXi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GatewayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameters of one WLAN uplink scenario. Powers are linear (not dB).
struct WlanConfig {
  int n_stations = 10;  ///< N, single-antenna stations
  int n_antennas = 4;   ///< M, AP antennas
  int n_rus = 9;        ///< R, 26-tone resource units
  int n_slots = 50;     ///< T, scheduled-access slots per episode
  double cell_radius_m = 15.0;
  double noise_power = 6e-6;  ///< sigma^2; default puts the median 1x1 SNR at 7.5 m near 20 dB
  double total_power = 1.0;   ///< per-station transmit budget P_total
  double ru_bandwidth_hz = 2.03125e6;  ///< 26 tones x 78.125 kHz
  std::uint64_t rng_seed = 1;

  // Synthetic frequency-selective channel model.
  double path_loss_exponent = 3.5;
  int n_taps = 8;
  double tap_spacing_s = 25e-9;
  double delay_spread_s = 50e-9;  ///< exponential power-delay-profile decay constant

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

/// SplitMix64 step; used to derive independent per-episode seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for episode `index` under a batch master seed. Distinct indices
/// yield distinct seeds (splitmix64 is a bijection).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Stable 64-bit FNV-1a hash, used for prompt fingerprints in logs.
std::uint64_t fnv1a64(const std::string& text);

/// Fixed "%.12g" rendering for CSV cells, so equal runs emit equal bytes.
std::string format_double(double value);

}  // namespace wiser
