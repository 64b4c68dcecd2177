#include "wiser/observation.hpp"

#include <algorithm>
#include <numeric>

namespace wiser {

namespace {

constexpr double kGainFloor = 1e-12;

// Indices of the top `count` entries; higher key wins when `descending`,
// ties go to the lower index.
std::vector<int> ranked_indices(const Eigen::VectorXd& key, bool descending) {
  std::vector<int> order(static_cast<std::size_t>(key.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return descending ? key[a] > key[b] : key[a] < key[b];
  });
  return order;
}

}  // namespace

ImpactMatrix impact_factors(const GainMatrix& zeta, const WlanConfig& config) {
  if (zeta.rows() != config.n_stations || zeta.cols() != config.n_rus)
    throw ValidationError("impact_factors: gain shape does not match config");
  const int n = config.n_stations;
  const int r = config.n_rus;

  ImpactMatrix impact;
  impact.eta.resize(n, r);
  impact.relative_load.resize(n);
  if (n == 1) {
    impact.eta.setOnes();
    impact.relative_load.setZero();
    return impact;
  }

  const GainMatrix floored = zeta.cwiseMax(kGainFloor);
  for (int i = 0; i < n; ++i) {
    // Per-RU sum of the other agents' gains relative to agent i's own.
    Eigen::VectorXd relative = Eigen::VectorXd::Zero(r);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      relative += (floored.row(k).array() / floored.row(i).array()).matrix().transpose();
    }
    const double total = relative.sum();
    impact.relative_load[i] = total;
    impact.eta.row(i) = (r / total) * relative.transpose();
  }
  return impact;
}

std::vector<AgentObservation> make_observations(const GainMatrix& zeta,
                                                const ImpactMatrix& impact,
                                                const std::vector<FeedbackStatus>& prev_feedback) {
  const int n = static_cast<int>(zeta.rows());
  if (static_cast<int>(prev_feedback.size()) != n)
    throw ValidationError("make_observations: feedback count does not match agent count");
  std::vector<AgentObservation> observations;
  observations.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    observations.push_back({i, zeta, impact, prev_feedback[static_cast<std::size_t>(i)]});
  return observations;
}

SemanticAnalysis semantic_analysis(const GainMatrix& zeta, const ImpactMatrix& impact,
                                   const WlanConfig& config) {
  const int n = config.n_stations;
  const int top = std::min(config.n_antennas, n);
  const Eigen::VectorXd strength = zeta.rowwise().sum();
  const Eigen::VectorXd& load = impact.relative_load;

  SemanticAnalysis out;
  out.is_strongest.assign(static_cast<std::size_t>(n), false);
  out.is_most_compatible.assign(static_cast<std::size_t>(n), false);
  out.dominating_agents.assign(static_cast<std::size_t>(n), 0);

  const std::vector<int> by_strength = ranked_indices(strength, /*descending=*/true);
  const std::vector<int> by_compat = ranked_indices(load, /*descending=*/false);
  for (int rank = 0; rank < top; ++rank) {
    out.is_strongest[static_cast<std::size_t>(by_strength[rank])] = true;
    out.is_most_compatible[static_cast<std::size_t>(by_compat[rank])] = true;
  }
  for (int i = 0; i < n; ++i) {
    int dominating = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && strength[j] > strength[i] && load[j] < load[i]) ++dominating;
    out.dominating_agents[static_cast<std::size_t>(i)] = dominating;
  }
  return out;
}

}  // namespace wiser
