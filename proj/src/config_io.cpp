#include "wiser/config_io.hpp"

#include <fstream>

namespace wiser {

nlohmann::json wlan_config_to_json(const WlanConfig& c) {
  return {{"n_stations", c.n_stations},
          {"n_antennas", c.n_antennas},
          {"n_rus", c.n_rus},
          {"n_slots", c.n_slots},
          {"cell_radius_m", c.cell_radius_m},
          {"noise_power", c.noise_power},
          {"total_power", c.total_power},
          {"ru_bandwidth_hz", c.ru_bandwidth_hz},
          {"rng_seed", c.rng_seed},
          {"path_loss_exponent", c.path_loss_exponent},
          {"n_taps", c.n_taps},
          {"tap_spacing_s", c.tap_spacing_s},
          {"delay_spread_s", c.delay_spread_s}};
}

WlanConfig wlan_config_from_json(const nlohmann::json& doc) {
  WlanConfig c;
  c.n_stations = doc.value("n_stations", c.n_stations);
  c.n_antennas = doc.value("n_antennas", c.n_antennas);
  c.n_rus = doc.value("n_rus", c.n_rus);
  c.n_slots = doc.value("n_slots", c.n_slots);
  c.cell_radius_m = doc.value("cell_radius_m", c.cell_radius_m);
  c.noise_power = doc.value("noise_power", c.noise_power);
  c.total_power = doc.value("total_power", c.total_power);
  c.ru_bandwidth_hz = doc.value("ru_bandwidth_hz", c.ru_bandwidth_hz);
  c.rng_seed = doc.value("rng_seed", c.rng_seed);
  c.path_loss_exponent = doc.value("path_loss_exponent", c.path_loss_exponent);
  c.n_taps = doc.value("n_taps", c.n_taps);
  c.tap_spacing_s = doc.value("tap_spacing_s", c.tap_spacing_s);
  c.delay_spread_s = doc.value("delay_spread_s", c.delay_spread_s);
  return c;
}

WlanConfig load_wlan_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file: " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("config file " + file.string() + ": " + e.what());
  }
  return wlan_config_from_json(doc);
}

void save_wlan_config(const WlanConfig& config, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write config file: " + file.string());
  out << wlan_config_to_json(config).dump(2) << '\n';
}

}  // namespace wiser
