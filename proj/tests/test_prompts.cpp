#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "wiser/prompts.hpp"

using namespace wiser;

namespace {

WlanConfig config_nm(int n, int m, int r) {
  WlanConfig config;
  config.n_stations = n;
  config.n_antennas = m;
  config.n_rus = r;
  return config;
}

std::vector<AgentObservation> observations_for(const WlanConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GainMatrix zeta(config.n_stations, config.n_rus);
  for (int i = 0; i < config.n_stations; ++i)
    for (int l = 0; l < config.n_rus; ++l)
      zeta(i, l) = 1e-4 * (1 + static_cast<int>(rng() % 1000));
  const ImpactMatrix impact = impact_factors(zeta, config);
  return make_observations(
      zeta, impact,
      std::vector<FeedbackStatus>(static_cast<std::size_t>(config.n_stations),
                                  FeedbackStatus::initial()));
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("render_template") {
  CHECK(render_template("a ${x} b", {{"x", "1"}}) == "a 1 b");
  CHECK(render_template("{\"k\": ${v}}", {{"v", "7"}}) == "{\"k\": 7}");  // literal braces pass
  CHECK_THROWS_WITH_AS(render_template("${nope}", {{"x", "1"}}),
                       doctest::Contains("unknown placeholder"), ConfigError);
  CHECK_THROWS_AS(render_template("${open", {}), ConfigError);
}

TEST_CASE("render_feedback wording is fixed per variant") {
  CHECK(render_feedback(FeedbackStatus::initial()) ==
        "This is the first round; there is no feedback yet.");
  CHECK(render_feedback(FeedbackStatus::success()) ==
        "Your previous response was parsed successfully.");
  const std::string err = render_feedback(FeedbackStatus::error("bad json"));
  CHECK(err.find("could not be parsed") != std::string::npos);
  CHECK(err.find("bad json") != std::string::npos);
  const std::string fixed = render_feedback(FeedbackStatus::corrected({2, 5}));
  CHECK(fixed.find("revoked on RU(s) 2, 5") != std::string::npos);
}

TEST_CASE("PT1 injects the semantic clauses") {
  const WlanConfig config = config_nm(10, 4, 9);
  const auto observations = observations_for(config, 11);
  const PromptBundle bundle =
      build_prompts(observations, TemplateId::PT1, StrategySpec::rate_max(), config, 0);
  REQUIRE(bundle.prompts.size() == 10);

  const SemanticAnalysis analysis =
      semantic_analysis(observations[0].zeta, observations[0].impact, config);
  int strongest_seen = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string& prompt = bundle.prompts[static_cast<std::size_t>(i)];
    const std::string agent = "Agent_" + std::to_string(i + 1);
    CHECK(prompt.find(agent) != std::string::npos);
    if (analysis.is_strongest[static_cast<std::size_t>(i)]) {
      CHECK(prompt.find(agent + " is one of the 4 strongest agents.") != std::string::npos);
      ++strongest_seen;
    } else {
      CHECK(prompt.find(agent + " is not one of the 4 strongest agents.") != std::string::npos);
    }
    CHECK(prompt.find("There are " +
                      std::to_string(analysis.dominating_agents[static_cast<std::size_t>(i)]) +
                      " agents that are stronger and more compatible") != std::string::npos);
    CHECK(prompt.find("no feedback yet") != std::string::npos);
    CHECK(prompt.find("\"assigned_rus\"") != std::string::npos);
    CHECK(prompt.find("${") == std::string::npos);  // nothing unrendered
  }
  CHECK(strongest_seen == 4);
}

TEST_CASE("PT2 injects one numeric array per RU") {
  const WlanConfig config = config_nm(10, 4, 9);
  const auto observations = observations_for(config, 12);
  const PromptBundle bundle =
      build_prompts(observations, TemplateId::PT2, StrategySpec::bcq(4), config, 3);
  REQUIRE(bundle.prompts.size() == 10);
  const std::string& prompt = bundle.prompts[0];
  for (int l = 1; l <= 9; ++l)
    CHECK(prompt.find("RU " + std::to_string(l) + ": [") != std::string::npos);
  // each array holds N = 10 entries -> 9 commas, 9 arrays total
  CHECK(count_occurrences(prompt, ",") >= 81);
  CHECK(prompt.find("best-channel-quality") != std::string::npos);
}

TEST_CASE("prompts are deterministic") {
  const WlanConfig config = config_nm(6, 2, 5);
  const auto observations = observations_for(config, 5);
  const PromptBundle a =
      build_prompts(observations, TemplateId::PT1, StrategySpec::rate_max(), config, 2);
  const PromptBundle b =
      build_prompts(observations, TemplateId::PT1, StrategySpec::rate_max(), config, 2);
  CHECK(a.prompts == b.prompts);
}

TEST_CASE("PT1 size is flat in N while PT2 grows") {
  const WlanConfig small = config_nm(10, 4, 9);
  const WlanConfig large = config_nm(40, 4, 9);
  const auto obs_small = observations_for(small, 21);
  const auto obs_large = observations_for(large, 22);

  const std::size_t pt1_small =
      build_prompts(obs_small, TemplateId::PT1, StrategySpec::rate_max(), small, 0).prompts[0].size();
  const std::size_t pt1_large =
      build_prompts(obs_large, TemplateId::PT1, StrategySpec::rate_max(), large, 0).prompts[0].size();
  const std::size_t pt2_small =
      build_prompts(obs_small, TemplateId::PT2, StrategySpec::rate_max(), small, 0).prompts[0].size();
  const std::size_t pt2_large =
      build_prompts(obs_large, TemplateId::PT2, StrategySpec::rate_max(), large, 0).prompts[0].size();

  CHECK(pt1_large <= pt1_small + 64);            // only digit widths may move
  CHECK(pt2_large > pt2_small + 9 * 30 * 5);     // 30 extra numbers per RU, >=5 chars each
}

TEST_CASE("builtin templates match the files shipped under data/") {
  const PromptTemplates builtin = PromptTemplates::builtin();
  const PromptTemplates files = PromptTemplates::load_dir(std::string(WISER_DATA_DIR) + "/templates");
  CHECK(builtin.pt1 == files.pt1);
  CHECK(builtin.pt2 == files.pt2);
}

TEST_CASE("template id parsing and misuse") {
  CHECK(template_id_from_string("pt1") == TemplateId::PT1);
  CHECK(template_id_from_string("PT2") == TemplateId::PT2);
  CHECK_THROWS_AS(template_id_from_string("pt3"), ConfigError);

  const WlanConfig config = config_nm(3, 2, 4);
  const auto observations = observations_for(config, 1);
  WlanConfig wrong = config;
  wrong.n_stations = 4;
  CHECK_THROWS_AS(
      build_prompts(observations, TemplateId::PT1, StrategySpec::rate_max(), wrong, 0),
      ValidationError);
}
