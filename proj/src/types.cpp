#include "wiser/types.hpp"

#include <cstdio>

namespace wiser {

void WlanConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (n_stations < 1) fail("n_stations must be >= 1");
  if (n_antennas < 1) fail("n_antennas must be >= 1");
  if (n_rus < 1 || n_rus > 9) fail("n_rus must be in [1, 9]");
  if (n_slots < 1) fail("n_slots must be >= 1");
  if (!(cell_radius_m > 0.0)) fail("cell_radius_m must be > 0");
  if (!(noise_power > 0.0)) fail("noise_power must be > 0");
  if (!(total_power > 0.0)) fail("total_power must be > 0");
  if (!(ru_bandwidth_hz > 0.0)) fail("ru_bandwidth_hz must be > 0");
  if (!(path_loss_exponent > 0.0)) fail("path_loss_exponent must be > 0");
  if (n_taps < 1) fail("n_taps must be >= 1");
  if (!(tap_spacing_s >= 0.0)) fail("tap_spacing_s must be >= 0");
  if (!(delay_spread_s > 0.0)) fail("delay_spread_s must be > 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace wiser
