#include "wiser/phy.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "wiser/mmse.hpp"

namespace wiser {

void McsTable::validate() const {
  if (m.size() == 0) throw ValidationError("mcs table: no operating points");
  if (m.size() != b.size()) throw ValidationError("mcs table: m/b length mismatch");
  if ((m.array() < 0.0).any()) throw ValidationError("mcs table: negative gradient");
  if (!(gamma_cap > 0.0)) throw ValidationError("mcs table: gamma_cap must be > 0");
  if (!(max_rate > 0.0)) throw ValidationError("mcs table: max_rate must be > 0");
  const double at_cap = (m.array() * gamma_cap + b.array()).minCoeff();
  if (at_cap > max_rate + 1e-9 * max_rate)
    throw ValidationError("mcs table: envelope exceeds max_rate at gamma_cap");
}

McsTable McsTable::default_table() {
  // 26-tone MCS0..11 operating points: (required SNR in dB, bits/s/Hz).
  // The map is the lower envelope of the chords between consecutive
  // points (anchored at the origin) plus the flat cap line; the points
  // are concave in linear SNR so the envelope passes through all of them.
  const std::vector<std::pair<double, double>> points = {
      {1.5, 0.5},  {5.0, 1.0},      {8.0, 1.5},  {11.0, 2.0},
      {15.0, 3.0}, {18.0, 4.0},     {20.0, 4.5}, {22.0, 5.0},
      {26.0, 6.0}, {28.0, 20.0 / 3}, {31.0, 7.5}, {34.0, 25.0 / 3}};

  const int k = static_cast<int>(points.size());
  McsTable table;
  table.m.resize(k + 1);
  table.b.resize(k + 1);
  double prev_gamma = 0.0;
  double prev_rate = 0.0;
  for (int i = 0; i < k; ++i) {
    const double gamma = std::pow(10.0, points[i].first / 10.0);
    const double rate = points[i].second;
    table.m[i] = (rate - prev_rate) / (gamma - prev_gamma);
    table.b[i] = prev_rate - table.m[i] * prev_gamma;
    prev_gamma = gamma;
    prev_rate = rate;
  }
  table.m[k] = 0.0;
  table.b[k] = prev_rate;
  table.gamma_cap = prev_gamma;
  table.max_rate = prev_rate;
  table.validate();
  return table;
}

McsTable load_mcs_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open mcs table: " + file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("mcs table " + file.string() + ": " + e.what());
  }
  McsTable table;
  const auto& m = doc.at("m");
  const auto& b = doc.at("b");
  table.m.resize(static_cast<Eigen::Index>(m.size()));
  table.b.resize(static_cast<Eigen::Index>(b.size()));
  for (Eigen::Index i = 0; i < table.m.size(); ++i) table.m[i] = m[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < table.b.size(); ++i) table.b[i] = b[static_cast<std::size_t>(i)];
  table.gamma_cap = doc.at("gamma_cap");
  table.max_rate = doc.at("max_rate");
  table.validate();
  return table;
}

void save_mcs_table(const McsTable& table, const std::filesystem::path& file) {
  nlohmann::json doc;
  doc["m"] = std::vector<double>(table.m.data(), table.m.data() + table.m.size());
  doc["b"] = std::vector<double>(table.b.data(), table.b.data() + table.b.size());
  doc["gamma_cap"] = table.gamma_cap;
  doc["max_rate"] = table.max_rate;
  doc["units"] = {{"gamma", "linear"}, {"rate", "bits/s/Hz"}};
  std::ofstream out(file);
  if (!out) throw IoError("cannot write mcs table: " + file.string());
  out << doc.dump(2) << '\n';
}

double mcs_rate(double gamma, const McsTable& table) {
  if (table.m.size() == 0) throw ValidationError("mcs_rate: empty table");
  if (!(gamma >= 0.0)) throw ValidationError("mcs_rate: gamma must be >= 0");
  if (gamma >= table.gamma_cap) return table.max_rate;
  const double envelope = (table.m.array() * gamma + table.b.array()).minCoeff();
  return std::clamp(envelope, 0.0, table.max_rate);
}

PowerAllocation allocate_power(const AssignmentMatrix& assignment, const WlanConfig& config) {
  if (assignment.rows() != config.n_stations || assignment.cols() != config.n_rus)
    throw ValidationError("allocate_power: assignment shape does not match config");
  PowerAllocation p = PowerAllocation::Zero(assignment.rows(), assignment.cols());
  for (int i = 0; i < assignment.rows(); ++i) {
    const int assigned = assignment.row(i).sum();
    if (assigned == 0) continue;
    const double share = config.total_power / assigned;
    // Equal split; the last assigned RU takes the remainder so the row
    // sums to the budget exactly even when share is not representable.
    double spent = 0.0;
    int last = -1;
    int filled = 0;
    for (int l = 0; l < assignment.cols(); ++l) {
      if (assignment(i, l) == 0) continue;
      last = l;
      if (filled + 1 < assigned) {
        p(i, l) = share;
        spent += share;
        ++filled;
      }
    }
    p(i, last) = config.total_power - spent;
  }
  return p;
}

LinkMetrics evaluate_slot(const ChannelRealization& chan, int slot,
                          const AssignmentMatrix& assignment, const WlanConfig& config,
                          const McsTable& table) {
  if (slot < 0 || slot >= chan.n_slots())
    throw ValidationError("evaluate_slot: slot out of range");
  if (!is_binary(assignment)) throw ValidationError("evaluate_slot: assignment is not binary");
  const int n = config.n_stations;
  const int r = config.n_rus;
  const PowerAllocation power = allocate_power(assignment, config);

  LinkMetrics metrics;
  metrics.sinr = Eigen::MatrixXd::Zero(n, r);
  metrics.rate_per_ru = Eigen::MatrixXd::Zero(n, r);

  std::vector<int> group;
  for (int l = 0; l < r; ++l) {
    group.clear();
    for (int i = 0; i < n; ++i)
      if (assignment(i, l) != 0) group.push_back(i);
    if (group.empty()) continue;

    ComplexMatrix eff(config.n_antennas, group.size());
    for (std::size_t g = 0; g < group.size(); ++g)
      eff.col(static_cast<Eigen::Index>(g)) =
          std::sqrt(power(group[g], l)) * chan.channel(slot, group[g], l);

    const Eigen::VectorXd sinr = compute_sinr<double>(eff, config.noise_power);
    for (std::size_t g = 0; g < group.size(); ++g) {
      metrics.sinr(group[g], l) = sinr[static_cast<Eigen::Index>(g)];
      metrics.rate_per_ru(group[g], l) =
          config.ru_bandwidth_hz * mcs_rate(sinr[static_cast<Eigen::Index>(g)], table);
    }
  }
  metrics.rate_per_sta = metrics.rate_per_ru.rowwise().sum();
  return metrics;
}

}  // namespace wiser
