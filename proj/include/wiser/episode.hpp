#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "wiser/gateway.hpp"
#include "wiser/phy.hpp"
#include "wiser/policies.hpp"
#include "wiser/prompts.hpp"

namespace wiser {

/// Everything logged for one slot: raw and corrected assignments, rates,
/// feedback, and (for llm runs) the raw model responses.
struct SlotLog {
  int slot = 0;
  AssignmentMatrix raw_assignment;  ///< as decided / parsed
  AssignmentMatrix assignment;      ///< after self-correction, always feasible
  std::vector<int> corrected_rus;   ///< 0-based RU indices zeroed by correction
  GroupSizes groups_raw;
  GroupSizes groups;
  Eigen::VectorXd rate_per_sta;
  double rate_sum = 0.0;
  std::vector<FeedbackStatus> feedback;
  std::vector<std::string> raw_intents;  ///< llm runs only
  double wall_ms = 0.0;
};

struct EpisodeRecord {
  WlanConfig config;
  PolicySpec policy;
  int episode_index = 0;
  std::vector<SlotLog> slots;

  std::vector<double> rate_sums() const;
  std::vector<AssignmentMatrix> raw_assignments() const;
};

struct EpisodeOptions {
  TemplateId template_id = TemplateId::PT1;
  StrategySpec strategy = StrategySpec::rate_max();
  PromptTemplates templates = PromptTemplates::builtin();
  /// Off by default: feedback is limited to parse status; when on, agents
  /// whose RUs were revoked see SelfCorrected instead of ParseSuccess.
  bool revocation_feedback = false;
  std::ostream* response_log = nullptr;  ///< JSONL sink for llm runs
  /// Non-owning; replaces the gateway-built backend when set (custom
  /// model integrations, fault injection in tests).
  Backend* backend_override = nullptr;
};

/// Runs the per-slot loop over the whole realization: observations ->
/// actions (policy or gateway) -> self-correction -> link evaluation ->
/// feedback into the next slot. A gateway is required iff policy is llm.
/// Per-agent gateway failures zero that agent's row and the run continues.
EpisodeRecord run_episode(const ChannelRealization& chan, const PolicySpec& policy,
                          const WlanConfig& config, const McsTable& table,
                          const EpisodeOptions& options = {},
                          const GatewayConfig* gateway = nullptr);

/// Generates `episodes` independent realizations (seeds derived from the
/// master seed) and runs each. Per-episode failures propagate; use the
/// trace-based overload to run on pre-generated channels.
std::vector<EpisodeRecord> run_batch(const WlanConfig& config, int episodes,
                                     std::uint64_t master_seed, const PolicySpec& policy,
                                     const McsTable& table, const EpisodeOptions& options = {},
                                     const GatewayConfig* gateway = nullptr);
std::vector<EpisodeRecord> run_batch(const std::vector<ChannelRealization>& traces,
                                     const PolicySpec& policy, const McsTable& table,
                                     const EpisodeOptions& options = {},
                                     const GatewayConfig* gateway = nullptr);

/// Structured-text round trip, one file per episode. Timing is part of the
/// log but can be suppressed to get a canonical byte-stable form.
void write_record(const EpisodeRecord& record, const std::filesystem::path& file,
                  bool include_timing = true);
EpisodeRecord read_record(const std::filesystem::path& file);

/// Compact per-slot results table: episode,slot,rate_sum,parse_errors,
/// corrected_rus. Deterministic byte-for-byte under a deterministic run.
void write_results_csv(const std::vector<EpisodeRecord>& records,
                       const std::filesystem::path& file);

}  // namespace wiser
