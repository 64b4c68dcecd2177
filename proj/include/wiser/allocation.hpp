#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wiser/types.hpp"

namespace wiser {

/// Per-agent, per-slot outcome of the intent pipeline. Exactly one status
/// per agent per slot; Initial is the defined state before the first slot.
struct FeedbackStatus {
  enum class Kind { Initial, ParseSuccess, ParseError, SelfCorrected };
  Kind kind = Kind::Initial;
  std::string detail;            ///< ParseError only
  std::vector<int> revoked_rus;  ///< SelfCorrected only, 1-based RU numbers

  static FeedbackStatus initial() { return {}; }
  static FeedbackStatus success() { return {Kind::ParseSuccess, {}, {}}; }
  static FeedbackStatus error(std::string what) { return {Kind::ParseError, std::move(what), {}}; }
  static FeedbackStatus corrected(std::vector<int> rus) {
    return {Kind::SelfCorrected, {}, std::move(rus)};
  }

  bool ok() const { return kind == Kind::ParseSuccess; }
  bool operator==(const FeedbackStatus&) const = default;
};

std::string to_string(FeedbackStatus::Kind kind);
FeedbackStatus::Kind feedback_kind_from_string(const std::string& name);

/// All per-agent RU subsets, |A| = 2^R.
struct ActionSet {
  int n_rus;
  /// Every subset as a bitmask over RUs (bit l set = RU l assigned).
  std::vector<std::uint16_t> masks() const;
};

/// Number of RU subsets available to one agent: sum_k C(R,k) = 2^R.
std::uint64_t action_space_size(int n_rus);

/// Number of MIMO user groups a centralized scheduler must consider:
/// sum over group sizes 1..M of C(N, m).
std::uint64_t centralized_combinations(int n_stations, int n_antennas);

/// Indices of RUs whose occupancy exceeds the spatial limit M.
std::vector<int> validate(const AssignmentMatrix& assignment, const WlanConfig& config);

/// Revokes every assignment on every over-occupied RU (whole column, all
/// occupants) and reports which RUs were corrected. Feasible columns are
/// returned untouched; the result always passes validate().
std::pair<AssignmentMatrix, std::vector<int>> self_correct(const AssignmentMatrix& assignment,
                                                           const WlanConfig& config);

/// Column sums g_l, the per-RU MU-MIMO group sizes.
GroupSizes group_sizes(const AssignmentMatrix& assignment);

/// True if every entry is 0 or 1.
bool is_binary(const AssignmentMatrix& assignment);

/// "011010..." row serialization used by episode logs.
std::string row_to_digits(const AssignmentMatrix& assignment, int station);
AssignmentMatrix assignment_from_digits(const std::vector<std::string>& rows);

}  // namespace wiser
