#include "wiser/allocation.hpp"

#include <algorithm>

namespace wiser {

std::string to_string(FeedbackStatus::Kind kind) {
  switch (kind) {
    case FeedbackStatus::Kind::Initial: return "initial";
    case FeedbackStatus::Kind::ParseSuccess: return "parse_success";
    case FeedbackStatus::Kind::ParseError: return "parse_error";
    case FeedbackStatus::Kind::SelfCorrected: return "self_corrected";
  }
  return "unknown";
}

FeedbackStatus::Kind feedback_kind_from_string(const std::string& name) {
  if (name == "initial") return FeedbackStatus::Kind::Initial;
  if (name == "parse_success") return FeedbackStatus::Kind::ParseSuccess;
  if (name == "parse_error") return FeedbackStatus::Kind::ParseError;
  if (name == "self_corrected") return FeedbackStatus::Kind::SelfCorrected;
  throw ValidationError("unknown feedback kind: " + name);
}

std::vector<std::uint16_t> ActionSet::masks() const {
  if (n_rus < 0 || n_rus > 9) throw ValidationError("ActionSet: n_rus must be in [0, 9]");
  std::vector<std::uint16_t> all(static_cast<std::size_t>(1) << n_rus);
  for (std::size_t mask = 0; mask < all.size(); ++mask)
    all[mask] = static_cast<std::uint16_t>(mask);
  return all;
}

std::uint64_t action_space_size(int n_rus) {
  if (n_rus < 0 || n_rus > 62) throw ValidationError("action_space_size: n_rus out of range");
  return std::uint64_t{1} << n_rus;
}

std::uint64_t centralized_combinations(int n_stations, int n_antennas) {
  if (n_antennas < 1 || n_antennas > n_stations)
    throw ValidationError("centralized_combinations: requires 1 <= M <= N");
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, 0)
  for (int m = 1; m <= n_antennas; ++m) {
    binom = binom * static_cast<std::uint64_t>(n_stations - m + 1) / static_cast<std::uint64_t>(m);
    total += binom;
  }
  return total;
}

std::vector<int> validate(const AssignmentMatrix& assignment, const WlanConfig& config) {
  if (assignment.rows() != config.n_stations || assignment.cols() != config.n_rus)
    throw ValidationError("validate: assignment shape does not match config");
  std::vector<int> violating;
  for (int l = 0; l < assignment.cols(); ++l)
    if (assignment.col(l).sum() > config.n_antennas) violating.push_back(l);
  return violating;
}

std::pair<AssignmentMatrix, std::vector<int>> self_correct(const AssignmentMatrix& assignment,
                                                           const WlanConfig& config) {
  const std::vector<int> violating = validate(assignment, config);
  AssignmentMatrix corrected = assignment;
  for (int l : violating) corrected.col(l).setZero();
  return {std::move(corrected), violating};
}

GroupSizes group_sizes(const AssignmentMatrix& assignment) {
  return assignment.colwise().sum().transpose();
}

bool is_binary(const AssignmentMatrix& assignment) {
  return ((assignment.array() == 0) || (assignment.array() == 1)).all();
}

std::string row_to_digits(const AssignmentMatrix& assignment, int station) {
  std::string digits(static_cast<std::size_t>(assignment.cols()), '0');
  for (int l = 0; l < assignment.cols(); ++l)
    if (assignment(station, l) != 0) digits[static_cast<std::size_t>(l)] = '1';
  return digits;
}

AssignmentMatrix assignment_from_digits(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ValidationError("assignment_from_digits: no rows");
  const int n = static_cast<int>(rows.size());
  const int r = static_cast<int>(rows.front().size());
  AssignmentMatrix out(n, r);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != r)
      throw ValidationError("assignment_from_digits: ragged rows");
    for (int l = 0; l < r; ++l) {
      const char c = rows[i][static_cast<std::size_t>(l)];
      if (c != '0' && c != '1') throw ValidationError("assignment_from_digits: non-binary digit");
      out(i, l) = c - '0';
    }
  }
  return out;
}

}  // namespace wiser
