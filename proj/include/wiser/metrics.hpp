#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wiser/episode.hpp"
#include "wiser/types.hpp"

namespace wiser {

/// Elementwise disagreement between inferred and reference assignments.
/// fp counts entries set in the reference but missing from the inference,
/// fn the converse; the rate divides their sum by R*N*T.
struct ErrorReport {
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double error_rate = 0.0;
};

ErrorReport assignment_error(const std::vector<AssignmentMatrix>& inferred,
                             const std::vector<AssignmentMatrix>& actual,
                             const WlanConfig& config);

/// Paired relative throughput improvement, in percent:
/// 100 * sum(policy - baseline) / sum(baseline) over all slots.
struct GainReport {
  double gain_percent = 0.0;
  double policy_sum = 0.0;
  double baseline_sum = 0.0;
};

GainReport performance_gain(const std::vector<EpisodeRecord>& policy_records,
                            const std::vector<EpisodeRecord>& baseline_records);

/// Empirical CDF of the per-slot rate-sums: sorted (rate, fraction) pairs,
/// monotone and ending at exactly 1.
std::vector<std::pair<double, double>> rate_cdf(const std::vector<EpisodeRecord>& records);

/// Per-RU histograms of the MU-MIMO group sizes over all logged slots,
/// before and after self-correction, plus the per-RU count of slots whose
/// raw occupancy violated the spatial limit.
struct GroupSizeDistribution {
  Eigen::MatrixXi raw;    ///< R x (N+1), raw assignment counts per size
  Eigen::MatrixXi final_; ///< R x (N+1), post-correction counts per size
  Eigen::VectorXi violations;  ///< per RU, slots with raw g_l > M
  int spatial_limit = 0;       ///< M
};

GroupSizeDistribution group_size_distribution(const std::vector<EpisodeRecord>& records);

void write_error_csv(const ErrorReport& report, const std::filesystem::path& file);
void write_gain_csv(const GainReport& report, const std::filesystem::path& file);
void write_cdf_csv(const std::vector<std::pair<double, double>>& cdf,
                   const std::filesystem::path& file);
void write_group_size_csv(const GroupSizeDistribution& dist, const std::filesystem::path& file);

}  // namespace wiser
