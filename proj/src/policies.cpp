#include "wiser/policies.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace wiser {

namespace {

std::vector<int> top_indices(const Eigen::VectorXd& key, int count) {
  std::vector<int> order(static_cast<std::size_t>(key.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });
  order.resize(static_cast<std::size_t>(count));
  return order;
}

}  // namespace

PolicySpec PolicySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);

  PolicySpec spec;
  try {
    if (name == "bcq" || name == "bcq-per-ru") {
      spec.kind = Kind::Bcq;
      spec.per_ru = (name == "bcq-per-ru");
      if (arg.empty()) throw ConfigError("policy '" + name + "' needs a station count, e.g. bcq:4");
      spec.k = std::stoi(arg);
    } else if (name == "random") {
      spec.kind = Kind::Random;
      if (!arg.empty()) spec.density = std::stod(arg);
    } else if (name == "greedy") {
      spec.kind = Kind::Greedy;
    } else if (name == "oracle") {
      spec.kind = Kind::Oracle;
      if (!arg.empty()) spec.oracle_budget_bits = std::stoi(arg);
    } else if (name == "llm") {
      spec.kind = Kind::Llm;
    } else {
      throw ConfigError("unknown policy: " + text);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad policy argument in: " + text);
  } catch (const std::out_of_range&) {
    throw ConfigError("bad policy argument in: " + text);
  }
  if (spec.kind == Kind::Random && !(spec.density >= 0.0 && spec.density <= 1.0))
    throw ConfigError("random policy density must be in [0, 1]");
  return spec;
}

std::string PolicySpec::str() const {
  switch (kind) {
    case Kind::Bcq: return (per_ru ? "bcq-per-ru:" : "bcq:") + std::to_string(k);
    case Kind::Random: return "random:" + std::to_string(density);
    case Kind::Greedy: return "greedy";
    case Kind::Oracle: return "oracle";
    case Kind::Llm: return "llm";
  }
  return "unknown";
}

AssignmentMatrix bcq_assign(const GainMatrix& zeta, int k, const WlanConfig& config) {
  if (k < 1 || k > std::min(config.n_stations, config.n_antennas))
    throw ValidationError("bcq_assign: k must be in [1, min(N, M)]");
  AssignmentMatrix nu = AssignmentMatrix::Zero(config.n_stations, config.n_rus);
  for (int i : top_indices(zeta.rowwise().sum(), k)) nu.row(i).setOnes();
  return nu;
}

AssignmentMatrix bcq_assign_per_ru(const GainMatrix& zeta, int k, const WlanConfig& config) {
  if (k < 1 || k > std::min(config.n_stations, config.n_antennas))
    throw ValidationError("bcq_assign_per_ru: k must be in [1, min(N, M)]");
  AssignmentMatrix nu = AssignmentMatrix::Zero(config.n_stations, config.n_rus);
  for (int l = 0; l < config.n_rus; ++l)
    for (int i : top_indices(zeta.col(l), k)) nu(i, l) = 1;
  return nu;
}

AssignmentMatrix greedy_assign(const GainMatrix& zeta, const ImpactMatrix& impact,
                               const WlanConfig& config) {
  const int admitted = std::min(config.n_antennas, config.n_stations);
  AssignmentMatrix nu = AssignmentMatrix::Zero(config.n_stations, config.n_rus);
  for (int l = 0; l < config.n_rus; ++l) {
    const Eigen::VectorXd score =
        zeta.col(l).array() / impact.eta.col(l).array().max(1e-12);
    for (int i : top_indices(score, admitted)) nu(i, l) = 1;
  }
  return nu;
}

AssignmentMatrix random_assign(std::uint64_t seed, const WlanConfig& config, double density) {
  std::mt19937_64 engine(seed);
  AssignmentMatrix nu(config.n_stations, config.n_rus);
  for (int i = 0; i < config.n_stations; ++i)
    for (int l = 0; l < config.n_rus; ++l) {
      const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      nu(i, l) = u < density ? 1 : 0;
    }
  return self_correct(nu, config).first;
}

OracleResult oracle_assign(const ChannelRealization& chan, int slot, const WlanConfig& config,
                           const McsTable& table, int budget_bits) {
  const int bits = config.n_stations * config.n_rus;
  if (bits > budget_bits)
    throw ValidationError("oracle_assign: N*R = " + std::to_string(bits) +
                          " exceeds the enumeration budget of " + std::to_string(budget_bits) +
                          " bits");
  const std::uint64_t total = std::uint64_t{1} << bits;

  OracleResult best;
  best.assignment = AssignmentMatrix::Zero(config.n_stations, config.n_rus);
  best.rate_sum = evaluate_slot(chan, slot, best.assignment, config, table).rate_sum();

  AssignmentMatrix nu(config.n_stations, config.n_rus);
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    for (int i = 0; i < config.n_stations; ++i)
      for (int l = 0; l < config.n_rus; ++l)
        nu(i, l) = (mask >> (i * config.n_rus + l)) & 1u;
    if ((nu.colwise().sum().array() > config.n_antennas).any()) continue;
    const double rate = evaluate_slot(chan, slot, nu, config, table).rate_sum();
    if (rate > best.rate_sum) {
      best.rate_sum = rate;
      best.assignment = nu;
    }
  }
  return best;
}

}  // namespace wiser
