#include "wiser/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace wiser {

namespace {

using nlohmann::json;

/// Answers every prompt with a schema-true intent computed by a baseline
/// policy on the bundle's observation snapshot. Bypasses text generation
/// entirely, which makes llm-path runs reproducible and error-free.
class MockBackend : public Backend {
 public:
  MockBackend(PolicySpec policy, WlanConfig wlan) : policy_(policy), wlan_(std::move(wlan)) {}

  std::string complete(const PromptBundle& bundle, int agent_index) override {
    const AssignmentMatrix nu = decide(bundle);
    return serialize_intent(agent_index + 1, nu.row(agent_index),
                            "mock backend following policy " + policy_.str());
  }

 private:
  AssignmentMatrix decide(const PromptBundle& bundle) const {
    switch (policy_.kind) {
      case PolicySpec::Kind::Bcq:
        return policy_.per_ru ? bcq_assign_per_ru(bundle.zeta, policy_.k, wlan_)
                              : bcq_assign(bundle.zeta, policy_.k, wlan_);
      case PolicySpec::Kind::Greedy:
        return greedy_assign(bundle.zeta, bundle.impact, wlan_);
      case PolicySpec::Kind::Random:
        return random_assign(derive_seed(wlan_.rng_seed, static_cast<std::uint64_t>(bundle.slot)),
                             wlan_, policy_.density);
      default:
        throw GatewayError("mock backend supports bcq, greedy and random policies only");
    }
  }

  PolicySpec policy_;
  WlanConfig wlan_;
};

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(GatewayConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) throw GatewayError("http backend needs an endpoint URL");
    if (config_.model.empty()) throw GatewayError("http backend needs a model name");
  }

  std::string complete(const PromptBundle& bundle, int agent_index) override {
    const json request = {{"model", config_.model},
                          {"messages", json::array({{{"role", "user"},
                                                     {"content", bundle.prompts[agent_index]}}})},
                          {"stream", false},
                          {"format", config_.format_hint}};
    const std::string body = request.dump();

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      // One client per call; httplib clients are not safe to share across
      // the fan-out threads.
      httplib::Client client(config_.endpoint);
      client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
      client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
      auto result = client.Post(config_.chat_path, body, "application/json");
      if (!result) {
        last_error = "connection failed: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status < 200 || result->status >= 300) {
        last_error = "http status " + std::to_string(result->status);
        continue;
      }
      return extract_content(result->body);
    }
    throw GatewayError(last_error);
  }

 private:
  static std::string extract_content(const std::string& body) {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::exception&) {
      // Some servers answer plain text; let the intent parser deal with it.
      return body;
    }
    if (doc.contains("message") && doc["message"].contains("content"))
      return doc["message"]["content"].get<std::string>();
    if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty() &&
        doc["choices"][0].contains("message"))
      return doc["choices"][0]["message"].value("content", "");
    return body;
  }

  GatewayConfig config_;
};

}  // namespace

std::unique_ptr<Backend> make_backend(const GatewayConfig& config, const WlanConfig& wlan) {
  if (config.backend == GatewayConfig::BackendKind::Mock)
    return std::make_unique<MockBackend>(config.mock_policy, wlan);
  return std::make_unique<HttpBackend>(config);
}

std::optional<std::string> extract_first_json_object(const std::string& text) {
  const std::size_t start = text.find('{');
  if (start == std::string::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"')
      in_string = true;
    else if (c == '{')
      ++depth;
    else if (c == '}' && --depth == 0)
      return text.substr(start, i - start + 1);
  }
  return std::nullopt;
}

std::pair<Eigen::RowVectorXi, FeedbackStatus> parse_intent(const std::string& raw, int n_rus,
                                                           int expected_agent_id) {
  Eigen::RowVectorXi row = Eigen::RowVectorXi::Zero(n_rus);
  const auto object_text = extract_first_json_object(raw);
  if (!object_text) return {row, FeedbackStatus::error("no JSON object in response")};

  json intent;
  try {
    intent = json::parse(*object_text);
  } catch (const json::exception&) {
    return {row, FeedbackStatus::error("malformed JSON object")};
  }

  if (!intent.contains("agent_id") || !intent["agent_id"].is_number_integer())
    return {row, FeedbackStatus::error("missing or non-integer agent_id")};
  if (expected_agent_id >= 1 && intent["agent_id"].get<int>() != expected_agent_id)
    return {row, FeedbackStatus::error("agent_id mismatch")};
  if (!intent.contains("assigned_rus") || !intent["assigned_rus"].is_array())
    return {row, FeedbackStatus::error("missing assigned_rus array")};
  if (intent.contains("reasoning") && !intent["reasoning"].is_string())
    return {row, FeedbackStatus::error("reasoning must be a string")};

  for (const auto& entry : intent["assigned_rus"]) {
    if (!entry.is_number_integer())
      return {Eigen::RowVectorXi::Zero(n_rus), FeedbackStatus::error("non-integer RU entry")};
    const int ru = entry.get<int>();
    if (ru < 1 || ru > n_rus)
      return {Eigen::RowVectorXi::Zero(n_rus),
              FeedbackStatus::error("RU out of range: " + std::to_string(ru))};
    row[ru - 1] = 1;  // duplicates collapse
  }
  return {row, FeedbackStatus::success()};
}

std::string serialize_intent(int agent_id, const Eigen::RowVectorXi& row,
                             const std::string& reasoning) {
  json rus = json::array();
  for (int l = 0; l < row.size(); ++l)
    if (row[l] != 0) rus.push_back(l + 1);
  const json intent = {{"agent_id", agent_id}, {"assigned_rus", rus}, {"reasoning", reasoning}};
  return intent.dump();
}

std::vector<IntentResponse> dispatch(const PromptBundle& bundle, Backend& backend,
                                     const GatewayConfig& config) {
  const int n = static_cast<int>(bundle.prompts.size());
  std::vector<IntentResponse> responses(static_cast<std::size_t>(n));
  if (n == 0) return responses;

  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      IntentResponse& response = responses[static_cast<std::size_t>(i)];
      response.agent_index = i;
      const auto started = std::chrono::steady_clock::now();
      try {
        response.raw = backend.complete(bundle, i);
        std::tie(response.row, response.status) =
            parse_intent(response.raw, bundle.n_rus, /*expected_agent_id=*/i + 1);
      } catch (const std::exception& e) {
        response.row = Eigen::RowVectorXi::Zero(bundle.n_rus);
        response.status = FeedbackStatus::error(std::string("gateway: ") + e.what());
      }
      response.latency_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
              .count();
    }
  };

  const int n_threads = std::clamp(config.max_in_flight, 1, n);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return responses;
}

std::vector<IntentResponse> dispatch(const PromptBundle& bundle, const GatewayConfig& config,
                                     const WlanConfig& wlan) {
  const std::unique_ptr<Backend> backend = make_backend(config, wlan);
  return dispatch(bundle, *backend, config);
}

void log_responses(std::ostream& out, int slot, const PromptBundle& bundle,
                   const std::vector<IntentResponse>& responses) {
  for (const IntentResponse& response : responses) {
    const std::size_t i = static_cast<std::size_t>(response.agent_index);
    const json line = {{"slot", slot},
                       {"agent", response.agent_index + 1},
                       {"prompt_fnv64", fnv1a64(bundle.prompts[i])},
                       {"raw", response.raw},
                       {"status", to_string(response.status.kind)},
                       {"detail", response.status.detail},
                       {"latency_ms", response.latency_ms}};
    out << line.dump() << '\n';
  }
}

}  // namespace wiser
