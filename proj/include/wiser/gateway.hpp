#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wiser/policies.hpp"
#include "wiser/prompts.hpp"
#include "wiser/types.hpp"

namespace wiser {

/// How the per-slot prompt fan-out reaches a language model: an HTTP chat
/// endpoint, or a deterministic local mock that answers with a baseline
/// policy's assignments in the same JSON schema.
struct GatewayConfig {
  enum class BackendKind { Mock, Http };
  BackendKind backend = BackendKind::Mock;

  PolicySpec mock_policy = PolicySpec::parse("bcq:4");

  std::string endpoint;           ///< e.g. http://localhost:11434
  std::string model;
  std::string chat_path = "/api/chat";
  double timeout_s = 60.0;
  int retries = 1;                ///< additional attempts after a failure
  std::string format_hint = "json";

  int max_in_flight = 4;          ///< request concurrency within one slot
};

/// One agent's response for one slot. `row` is meaningful only when
/// status is ParseSuccess; failed agents keep an all-zero row.
struct IntentResponse {
  int agent_index = 0;
  std::string raw;
  Eigen::RowVectorXi row;
  FeedbackStatus status;
  double latency_ms = 0.0;
};

/// Text-completion backend; implementations must be safe to call from
/// multiple threads at once. Throwing marks the agent as failed.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const PromptBundle& bundle, int agent_index) = 0;
};

std::unique_ptr<Backend> make_backend(const GatewayConfig& config, const WlanConfig& wlan);

/// Sends the N prompts (at most max_in_flight concurrently), parses every
/// response, and returns exactly N results ordered by agent index. Backend
/// failures are retried per config and then contained as error responses;
/// nothing escapes.
std::vector<IntentResponse> dispatch(const PromptBundle& bundle, const GatewayConfig& config,
                                     const WlanConfig& wlan);
std::vector<IntentResponse> dispatch(const PromptBundle& bundle, Backend& backend,
                                     const GatewayConfig& config);

/// Pulls the first balanced JSON object out of `raw` (models wrap output in
/// prose), validates it against the intent schema, and maps assigned_rus to
/// a binary row. Any violation yields ParseError plus an all-zero row.
/// When expected_agent_id >= 1, a mismatching agent_id is an error too.
std::pair<Eigen::RowVectorXi, FeedbackStatus> parse_intent(const std::string& raw, int n_rus,
                                                           int expected_agent_id = -1);

/// Schema-true JSON for a binary row; parse_intent inverts it exactly.
std::string serialize_intent(int agent_id, const Eigen::RowVectorXi& row,
                             const std::string& reasoning);

/// First balanced {...} span, brace-matched outside string literals.
std::optional<std::string> extract_first_json_object(const std::string& text);

/// One JSONL record per request/response pair.
void log_responses(std::ostream& out, int slot, const PromptBundle& bundle,
                   const std::vector<IntentResponse>& responses);

}  // namespace wiser
