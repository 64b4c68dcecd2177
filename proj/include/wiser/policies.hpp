#pragma once

#include <cstdint>
#include <string>

#include "wiser/observation.hpp"
#include "wiser/phy.hpp"
#include "wiser/types.hpp"

namespace wiser {

/// Which scheduler decides the RU assignments of a run.
struct PolicySpec {
  enum class Kind { Bcq, Random, Greedy, Oracle, Llm };
  Kind kind = Kind::Greedy;
  int k = 0;                ///< Bcq only: number of selected stations
  double density = 0.5;     ///< Random only: Bernoulli assignment probability
  bool per_ru = false;      ///< Bcq only: rank gains per RU instead of aggregate
  int oracle_budget_bits = 20;  ///< Oracle only: refuse when N*R exceeds this

  /// Accepts "bcq:4", "bcq-per-ru:2", "random", "random:0.3", "greedy",
  /// "oracle", "llm".
  static PolicySpec parse(const std::string& text);
  std::string str() const;
};

/// Best-channel-quality baseline: the k stations with the largest total
/// gain receive every RU, the rest none. Requires 1 <= k <= min(N, M).
AssignmentMatrix bcq_assign(const GainMatrix& zeta, int k, const WlanConfig& config);

/// Per-RU variant: each RU independently admits its k strongest stations.
AssignmentMatrix bcq_assign_per_ru(const GainMatrix& zeta, int k, const WlanConfig& config);

/// Deterministic heuristic: each RU admits up to M stations ranked by gain
/// discounted by impact (zeta / max(eta, eps)). Feasible by construction.
AssignmentMatrix greedy_assign(const GainMatrix& zeta, const ImpactMatrix& impact,
                               const WlanConfig& config);

/// Bernoulli(density) entries, then self-corrected. Seeded and reproducible.
AssignmentMatrix random_assign(std::uint64_t seed, const WlanConfig& config,
                               double density = 0.5);

struct OracleResult {
  AssignmentMatrix assignment;
  double rate_sum = 0.0;
};

/// Exhaustive maximizer of the slot rate-sum over all feasible assignments
/// (column sums <= M). Enumeration is joint over the N*R bits because the
/// power split couples a station's RUs. Throws ValidationError when
/// N*R > budget_bits; ties break toward the first candidate in mask order.
OracleResult oracle_assign(const ChannelRealization& chan, int slot, const WlanConfig& config,
                           const McsTable& table, int budget_bits = 20);

}  // namespace wiser
