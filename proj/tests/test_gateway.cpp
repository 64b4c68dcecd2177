#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wiser/gateway.hpp"

using namespace wiser;

namespace {

WlanConfig config_nm(int n, int m, int r) {
  WlanConfig config;
  config.n_stations = n;
  config.n_antennas = m;
  config.n_rus = r;
  return config;
}

PromptBundle bundle_for(const WlanConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GainMatrix zeta(config.n_stations, config.n_rus);
  for (int i = 0; i < config.n_stations; ++i)
    for (int l = 0; l < config.n_rus; ++l)
      zeta(i, l) = 1e-4 * (1 + static_cast<int>(rng() % 1000));
  const ImpactMatrix impact = impact_factors(zeta, config);
  const auto observations = make_observations(
      zeta, impact,
      std::vector<FeedbackStatus>(static_cast<std::size_t>(config.n_stations),
                                  FeedbackStatus::initial()));
  return build_prompts(observations, TemplateId::PT1, StrategySpec::rate_max(), config, 0);
}

Eigen::RowVectorXi random_row(std::mt19937_64& rng, int r) {
  Eigen::RowVectorXi row(r);
  for (int l = 0; l < r; ++l) row[l] = static_cast<int>(rng() % 2);
  return row;
}

// strict reference path: parse the known-clean payload with the library
// parser directly, no extraction step involved
Eigen::RowVectorXi strict_reference_row(const std::string& clean_json, int n_rus) {
  const nlohmann::json doc = nlohmann::json::parse(clean_json);
  Eigen::RowVectorXi row = Eigen::RowVectorXi::Zero(n_rus);
  for (int ru : doc.at("assigned_rus").get<std::vector<int>>()) row[ru - 1] = 1;
  return row;
}

}  // namespace

TEST_CASE("extract_first_json_object") {
  CHECK(extract_first_json_object("{\"a\":1}") == "{\"a\":1}");
  CHECK(extract_first_json_object("noise {\"a\":{\"b\":2}} trailing {\"c\":3}") ==
        "{\"a\":{\"b\":2}}");
  CHECK(extract_first_json_object("answer: {\"k\":\"}\"} end") == "{\"k\":\"}\"}");
  CHECK(extract_first_json_object("escaped {\"k\":\"a\\\"}b\"} done") == "{\"k\":\"a\\\"}b\"}");
  CHECK_FALSE(extract_first_json_object("no object here"));
  CHECK_FALSE(extract_first_json_object("{\"truncated\": [1, 2"));
}

TEST_CASE("parse_intent") {
  SUBCASE("direct mapping") {
    const auto [row, status] =
        parse_intent(R"({"agent_id":1,"assigned_rus":[1,5,9],"reasoning":"strong"})", 9);
    CHECK(status.ok());
    Eigen::RowVectorXi expected(9);
    expected << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    CHECK(row == expected);
  }
  SUBCASE("out-of-range RU") {
    const auto [row, status] = parse_intent(R"({"agent_id":1,"assigned_rus":[10]})", 9);
    CHECK(status.kind == FeedbackStatus::Kind::ParseError);
    CHECK(status.detail.find("RU out of range") != std::string::npos);
    CHECK(row.sum() == 0);
  }
  SUBCASE("duplicates collapse, empty list is valid") {
    const auto [row, status] = parse_intent(R"({"agent_id":2,"assigned_rus":[3,3,3]})", 4);
    CHECK(status.ok());
    CHECK(row.sum() == 1);
    const auto [empty_row, empty_status] = parse_intent(R"({"agent_id":2,"assigned_rus":[]})", 4);
    CHECK(empty_status.ok());
    CHECK(empty_row.sum() == 0);
  }
  SUBCASE("schema violations") {
    CHECK(parse_intent("no json", 4).second.kind == FeedbackStatus::Kind::ParseError);
    CHECK(parse_intent(R"({"assigned_rus":[1]})", 4).second.detail.find("agent_id") !=
          std::string::npos);
    CHECK(parse_intent(R"({"agent_id":"one","assigned_rus":[1]})", 4).second.kind ==
          FeedbackStatus::Kind::ParseError);
    CHECK(parse_intent(R"({"agent_id":1})", 4).second.detail.find("assigned_rus") !=
          std::string::npos);
    CHECK(parse_intent(R"({"agent_id":1,"assigned_rus":[1.5]})", 4).second.kind ==
          FeedbackStatus::Kind::ParseError);
    CHECK(parse_intent(R"({"agent_id":1,"assigned_rus":["2"]})", 4).second.kind ==
          FeedbackStatus::Kind::ParseError);
    CHECK(parse_intent(R"({"agent_id":1,"assigned_rus":[1],"reasoning":3})", 4).second.kind ==
          FeedbackStatus::Kind::ParseError);
  }
  SUBCASE("agent id mismatch when an expectation is given") {
    const auto [row, status] =
        parse_intent(R"({"agent_id":2,"assigned_rus":[1]})", 4, /*expected_agent_id=*/1);
    CHECK(status.detail == "agent_id mismatch");
    CHECK(row.sum() == 0);
    CHECK(parse_intent(R"({"agent_id":2,"assigned_rus":[1]})", 4, 2).second.ok());
  }
}

TEST_CASE("noisy prose-wrapped responses parse like the strict reference") {
  std::mt19937_64 rng(404);
  const std::vector<std::string> prefixes = {
      "Sure! Here is my decision:\n",
      "Thinking aloud... the strongest RUs are mine. Final answer: ",
      "```json\n",
      "Let me reason about compatibility first. Done.\n\n",
      ""};
  const std::vector<std::string> suffixes = {
      "\nThat is my final allocation.", "\n```", " -- end of message", "", "\nNote: {unbalanced"};

  for (int trial = 0; trial < 50; ++trial) {
    const int agent = 1 + static_cast<int>(rng() % 10);
    const Eigen::RowVectorXi row = random_row(rng, 9);
    const std::string clean = serialize_intent(agent, row, "noise trial");
    const std::string wrapped = prefixes[trial % prefixes.size()] + clean +
                                suffixes[(trial / 5) % suffixes.size()];
    const auto [parsed, status] = parse_intent(wrapped, 9, agent);
    REQUIRE(status.ok());
    CHECK(parsed == row);
    CHECK(parsed == strict_reference_row(clean, 9));
  }
}

TEST_CASE("malformed corpus always fails closed") {
  const std::vector<std::string> corpus = {
      R"({"agent_id":1,"assigned_rus":[0]})",       // RU below range
      R"({"agent_id":1,"assigned_rus":[10]})",      // RU above range
      R"({"agent_id":1,"assigned_rus":[-3]})",      // negative RU
      R"({"agent_id":1,"assigned_rus":"1,2"})",     // wrong type
      R"({"agent_id":1})",                          // missing array
      R"({"assigned_rus":[1]})",                    // missing id
      R"({"agent_id":1.7,"assigned_rus":[1]})",     // fractional id
      R"({"agent_id":"1","assigned_rus":[1]})",     // string id
      R"({"agent_id":1,"assigned_rus":[1.2]})",     // fractional RU
      R"({"agent_id":1,"assigned_rus":[null]})",    // null RU
      R"({"agent_id":1,"assigned_rus":[1],"reasoning":42})",  // bad reasoning type
      R"({"agent_id":2,"assigned_rus":[1]})",       // mismatching id
      R"({"agent_id":1,"assigned_rus":[1,)",        // truncated mid-array
      R"({"agent_id":1,"assigned_rus":)",           // truncated mid-object
      "plain text, no structure",                   //
      "",                                           //
      "[1, 2, 3]",                                  // array, not object
      "{{{",                                        // unbalanced braces
      R"({"agent_id":1 "assigned_rus":[1]})",       // missing comma
      R"({'agent_id':1,'assigned_rus':[1]})",       // single quotes
  };
  REQUIRE(corpus.size() == 20);
  for (const std::string& raw : corpus) {
    const auto [row, status] = parse_intent(raw, 9, 1);
    CHECK(status.kind == FeedbackStatus::Kind::ParseError);
    CHECK(row == Eigen::RowVectorXi::Zero(9));
  }
}

TEST_CASE("serialize/parse identity over the whole 512-action space") {
  for (int mask = 0; mask < 512; ++mask) {
    Eigen::RowVectorXi row(9);
    for (int l = 0; l < 9; ++l) row[l] = (mask >> l) & 1;
    const auto [parsed, status] = parse_intent(serialize_intent(3, row, "x"), 9, 3);
    REQUIRE(status.ok());
    CHECK(parsed == row);
  }
}

TEST_CASE("dispatch with a mock backend reproduces the baseline exactly") {
  const WlanConfig config = config_nm(10, 4, 9);
  const PromptBundle bundle = bundle_for(config, 50);

  GatewayConfig gateway;
  gateway.backend = GatewayConfig::BackendKind::Mock;
  gateway.mock_policy = PolicySpec::parse("bcq:4");
  gateway.max_in_flight = 4;

  const auto responses = dispatch(bundle, gateway, config);
  REQUIRE(responses.size() == 10);
  const AssignmentMatrix expected = bcq_assign(bundle.zeta, 4, config);
  for (int i = 0; i < 10; ++i) {
    CHECK(responses[i].agent_index == i);
    CHECK(responses[i].status.ok());
    CHECK(responses[i].row == expected.row(i));
    CHECK(responses[i].latency_ms >= 0.0);
  }

  SUBCASE("deterministic across calls") {
    const auto again = dispatch(bundle, gateway, config);
    for (int i = 0; i < 10; ++i) CHECK(again[i].raw == responses[i].raw);
  }
}

TEST_CASE("dispatch edge cases") {
  const WlanConfig config = config_nm(3, 2, 4);

  SUBCASE("zero prompts, zero responses") {
    PromptBundle empty;
    empty.n_rus = 4;
    GatewayConfig gateway;
    CHECK(dispatch(empty, gateway, config).empty());
  }

  SUBCASE("unreachable endpoint is contained after retries") {
    const PromptBundle bundle = bundle_for(config, 51);
    GatewayConfig gateway;
    gateway.backend = GatewayConfig::BackendKind::Http;
    gateway.endpoint = "http://127.0.0.1:9";  // discard port, nothing listens
    gateway.model = "none";
    gateway.timeout_s = 0.2;
    gateway.retries = 1;
    const auto responses = dispatch(bundle, gateway, config);
    REQUIRE(responses.size() == 3);
    for (const auto& response : responses) {
      CHECK(response.status.kind == FeedbackStatus::Kind::ParseError);
      CHECK(response.status.detail.find("gateway") != std::string::npos);
      CHECK(response.row == Eigen::RowVectorXi::Zero(4));
    }
  }

  SUBCASE("mock with an unsupported policy fails closed per agent") {
    const PromptBundle bundle = bundle_for(config, 52);
    GatewayConfig gateway;
    gateway.mock_policy = PolicySpec::parse("oracle");
    const auto responses = dispatch(bundle, gateway, config);
    REQUIRE(responses.size() == 3);
    for (const auto& response : responses)
      CHECK(response.status.kind == FeedbackStatus::Kind::ParseError);
  }
}

TEST_CASE("response log emits one JSONL record per agent") {
  const WlanConfig config = config_nm(4, 2, 5);
  const PromptBundle bundle = bundle_for(config, 53);
  GatewayConfig gateway;
  gateway.mock_policy = PolicySpec::parse("bcq:2");
  const auto responses = dispatch(bundle, gateway, config);

  std::ostringstream log;
  log_responses(log, 7, bundle, responses);
  std::istringstream lines(log.str());
  std::string line;
  int count = 0;
  std::set<int> agents;
  while (std::getline(lines, line)) {
    const auto doc = nlohmann::json::parse(line);
    CHECK(doc["slot"] == 7);
    CHECK(doc["status"] == "parse_success");
    CHECK(doc["prompt_fnv64"] ==
          fnv1a64(bundle.prompts[doc["agent"].get<int>() - 1]));
    agents.insert(doc["agent"].get<int>());
    ++count;
  }
  CHECK(count == 4);
  CHECK(agents == std::set<int>{1, 2, 3, 4});
}
