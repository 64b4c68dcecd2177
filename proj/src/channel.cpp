#include "wiser/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

namespace wiser {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr char kTraceMagic[4] = {'W', 'I', 'S', 'R'};
constexpr std::uint16_t kTraceVersion = 1;

// Distributions are built directly on raw engine output so that a seed
// pins the realization bit-for-bit regardless of the standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Complex complex_normal(double variance) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double theta = kTwoPi * uniform();
    const double r = std::sqrt(-variance * std::log(u1));
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::mt19937_64 engine_;
};

void put_bytes(std::ostream& out, std::uint64_t value, int n_bytes) {
  char buf[8];
  for (int i = 0; i < n_bytes; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(buf, n_bytes);
}
void put_u16(std::ostream& out, std::uint16_t v) { put_bytes(out, v, 2); }
void put_u32(std::ostream& out, std::uint32_t v) { put_bytes(out, v, 4); }
void put_u64(std::ostream& out, std::uint64_t v) { put_bytes(out, v, 8); }
void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

std::uint64_t get_bytes(std::istream& in, int n_bytes) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), n_bytes);
  std::uint64_t v = 0;
  for (int i = 0; i < n_bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}
std::uint16_t get_u16(std::istream& in) { return static_cast<std::uint16_t>(get_bytes(in, 2)); }
std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_bytes(in, 4)); }
std::uint64_t get_u64(std::istream& in) { return get_bytes(in, 8); }
double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

double path_gain(double distance_m, const WlanConfig& config) {
  const double d = std::max(distance_m, 1.0);  // 1 m reference distance
  return std::pow(d, -config.path_loss_exponent);
}

ChannelRealization generate_channels(const WlanConfig& config) {
  config.validate();
  const int n = config.n_stations;
  const int m = config.n_antennas;
  const int r = config.n_rus;
  const int t_slots = config.n_slots;
  const int taps = config.n_taps;

  // Exponential power-delay profile, normalized to unit total power so the
  // average squared gain equals the path gain.
  Eigen::VectorXd tap_power(taps);
  for (int tap = 0; tap < taps; ++tap)
    tap_power[tap] = std::exp(-(tap * config.tap_spacing_s) / config.delay_spread_s);
  tap_power /= tap_power.sum();

  // Tap response at each RU's center-frequency offset from the band center.
  ComplexMatrix tap_phase(taps, r);
  for (int l = 0; l < r; ++l) {
    const double freq = (l - (r - 1) / 2.0) * config.ru_bandwidth_hz;
    for (int tap = 0; tap < taps; ++tap) {
      const double arg = -kTwoPi * freq * (tap * config.tap_spacing_s);
      tap_phase(tap, l) = Complex(std::cos(arg), std::sin(arg));
    }
  }

  SeededRng rng(config.rng_seed);
  ChannelRealization out;
  out.config = config;
  out.h.reserve(t_slots);
  out.positions.reserve(t_slots);

  ComplexMatrix tap_gains(m, taps);
  for (int t = 0; t < t_slots; ++t) {
    Eigen::Matrix2Xd pos(2, n);
    ComplexMatrix slot(m, n * r);
    for (int i = 0; i < n; ++i) {
      const double radius = config.cell_radius_m * std::sqrt(rng.uniform());
      const double angle = kTwoPi * rng.uniform();
      pos.col(i) << radius * std::cos(angle), radius * std::sin(angle);
      const double amplitude = std::sqrt(path_gain(radius, config));

      for (int tap = 0; tap < taps; ++tap)
        for (int ant = 0; ant < m; ++ant) tap_gains(ant, tap) = rng.complex_normal(tap_power[tap]);

      for (int l = 0; l < r; ++l) slot.col(i * r + l) = amplitude * (tap_gains * tap_phase.col(l));
    }
    out.positions.push_back(std::move(pos));
    out.h.push_back(std::move(slot));
  }
  return out;
}

GainMatrix compute_gains(const ChannelRealization& chan, int slot) {
  if (slot < 0 || slot >= chan.n_slots())
    throw ValidationError("compute_gains: slot " + std::to_string(slot) + " out of range");
  const int n = chan.config.n_stations;
  const int r = chan.config.n_rus;
  GainMatrix zeta(n, r);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < r; ++l) zeta(i, l) = chan.h[slot].col(i * r + l).norm();
  return zeta;
}

void write_trace(const ChannelRealization& chan, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open trace file for writing: " + file.string());
  const WlanConfig& c = chan.config;
  out.write(kTraceMagic, 4);
  put_u16(out, kTraceVersion);
  put_u32(out, static_cast<std::uint32_t>(c.n_stations));
  put_u32(out, static_cast<std::uint32_t>(c.n_antennas));
  put_u32(out, static_cast<std::uint32_t>(c.n_rus));
  put_u32(out, static_cast<std::uint32_t>(c.n_slots));
  put_u64(out, c.rng_seed);
  put_f64(out, c.noise_power);
  put_f64(out, c.total_power);
  put_f64(out, c.ru_bandwidth_hz);
  for (int t = 0; t < c.n_slots; ++t)
    for (int i = 0; i < c.n_stations; ++i)
      for (int l = 0; l < c.n_rus; ++l)
        for (int ant = 0; ant < c.n_antennas; ++ant) {
          const Complex v = chan.h[t](ant, i * c.n_rus + l);
          put_f64(out, v.real());
          put_f64(out, v.imag());
        }
  for (int t = 0; t < c.n_slots; ++t)
    for (int i = 0; i < c.n_stations; ++i) {
      put_f64(out, chan.positions[t](0, i));
      put_f64(out, chan.positions[t](1, i));
    }
  if (!out) throw IoError("short write on trace file: " + file.string());
}

ChannelRealization read_trace(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open trace file: " + file.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kTraceMagic, 4) != 0)
    throw IoError("not a channel trace file: " + file.string());
  const std::uint16_t version = get_u16(in);
  if (version != kTraceVersion)
    throw IoError("unsupported trace version " + std::to_string(version));

  WlanConfig c;
  c.n_stations = static_cast<int>(get_u32(in));
  c.n_antennas = static_cast<int>(get_u32(in));
  c.n_rus = static_cast<int>(get_u32(in));
  c.n_slots = static_cast<int>(get_u32(in));
  c.rng_seed = get_u64(in);
  c.noise_power = get_f64(in);
  c.total_power = get_f64(in);
  c.ru_bandwidth_hz = get_f64(in);
  c.validate();

  ChannelRealization chan;
  chan.config = c;
  chan.h.reserve(c.n_slots);
  chan.positions.reserve(c.n_slots);
  for (int t = 0; t < c.n_slots; ++t) {
    ComplexMatrix slot(c.n_antennas, c.n_stations * c.n_rus);
    for (int i = 0; i < c.n_stations; ++i)
      for (int l = 0; l < c.n_rus; ++l)
        for (int ant = 0; ant < c.n_antennas; ++ant) {
          const double re = get_f64(in);
          const double im = get_f64(in);
          slot(ant, i * c.n_rus + l) = Complex(re, im);
        }
    chan.h.push_back(std::move(slot));
  }
  for (int t = 0; t < c.n_slots; ++t) {
    Eigen::Matrix2Xd pos(2, c.n_stations);
    for (int i = 0; i < c.n_stations; ++i) {
      pos(0, i) = get_f64(in);
      pos(1, i) = get_f64(in);
    }
    chan.positions.push_back(std::move(pos));
  }
  if (!in) throw IoError("truncated trace file: " + file.string());
  return chan;
}

void export_trace_text(const ChannelRealization& chan, const std::filesystem::path& file) {
  const WlanConfig& c = chan.config;
  nlohmann::json doc;
  doc["header"] = {{"n_stations", c.n_stations}, {"n_antennas", c.n_antennas},
                   {"n_rus", c.n_rus},           {"n_slots", c.n_slots},
                   {"seed", c.rng_seed},         {"noise_power", c.noise_power},
                   {"total_power", c.total_power}, {"ru_bandwidth_hz", c.ru_bandwidth_hz}};
  nlohmann::json slots = nlohmann::json::array();
  for (int t = 0; t < c.n_slots; ++t) {
    nlohmann::json rec;
    rec["slot"] = t;
    nlohmann::json positions = nlohmann::json::array();
    for (int i = 0; i < c.n_stations; ++i)
      positions.push_back({chan.positions[t](0, i), chan.positions[t](1, i)});
    rec["positions"] = std::move(positions);
    nlohmann::json stations = nlohmann::json::array();
    for (int i = 0; i < c.n_stations; ++i) {
      nlohmann::json rus = nlohmann::json::array();
      for (int l = 0; l < c.n_rus; ++l) {
        nlohmann::json antennas = nlohmann::json::array();
        for (int ant = 0; ant < c.n_antennas; ++ant) {
          const Complex v = chan.h[t](ant, i * c.n_rus + l);
          antennas.push_back({v.real(), v.imag()});
        }
        rus.push_back(std::move(antennas));
      }
      stations.push_back(std::move(rus));
    }
    rec["channels"] = std::move(stations);
    slots.push_back(std::move(rec));
  }
  doc["slots"] = std::move(slots);

  std::ofstream out(file);
  if (!out) throw IoError("cannot open export file for writing: " + file.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("short write on export file: " + file.string());
}

}  // namespace wiser
