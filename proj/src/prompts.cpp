#include "wiser/prompts.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wiser {

namespace {

// Keep these byte-identical with data/templates/pt1.txt and pt2.txt; the
// files are the versioned wording, the constants make the library
// self-contained. A unit test guards against drift.
constexpr const char* kTemplatePt1 =
    R"(You are Agent_${agent_id}, the uplink connection between station ${agent_id} and a WLAN access point with ${n_antennas} antennas. ${n_agents} agents compete for ${n_rus} resource units (RUs), numbered 1 to ${n_rus}, in scheduled-access round ${slot}. At most ${n_antennas} agents may transmit on the same RU; every RU requested by more than ${n_antennas} agents is revoked for all of its occupants.

Task: decide which RUs Agent_${agent_id} requests for this round. ${strategy}

Analysis of the agents' attributes:
- agent_strength: ${strength_clause}
- agent_compatibility: ${compatibility_clause}
- agent_comparison: ${comparison_clause}

System feedback: ${feedback}

Answer with exactly one JSON object and no other text, in this form:
{"agent_id": ${agent_id}, "assigned_rus": [<RU numbers from 1 to ${n_rus}>], "reasoning": "<one short sentence>"}
An empty assigned_rus list is allowed.
)";

constexpr const char* kTemplatePt2 =
    R"(You are Agent_${agent_id}, the uplink connection between station ${agent_id} and a WLAN access point with ${n_antennas} antennas. ${n_agents} agents compete for ${n_rus} resource units (RUs), numbered 1 to ${n_rus}, in scheduled-access round ${slot}. At most ${n_antennas} agents may transmit on the same RU; every RU requested by more than ${n_antennas} agents is revoked for all of its occupants.

Task: decide which RUs Agent_${agent_id} requests for this round. ${strategy}

UL channel conditions (gain of each of the ${n_agents} agents, one array per RU):
${channel_data}

System feedback: ${feedback}

Answer with exactly one JSON object and no other text, in this form:
{"agent_id": ${agent_id}, "assigned_rus": [<RU numbers from 1 to ${n_rus}>], "reasoning": "<one short sentence>"}
An empty assigned_rus list is allowed.
)";

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open template file: " + file.string());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::string agent_name(int agent_index) { return "Agent_" + std::to_string(agent_index + 1); }

std::string membership_clause(const std::string& agent, bool member, int top,
                              const std::string& attribute) {
  return agent + (member ? " is one of the " : " is not one of the ") + std::to_string(top) +
         " " + attribute + " agents.";
}

}  // namespace

TemplateId template_id_from_string(const std::string& name) {
  if (name == "pt1" || name == "PT1") return TemplateId::PT1;
  if (name == "pt2" || name == "PT2") return TemplateId::PT2;
  throw ConfigError("unknown prompt template: " + name);
}

std::string to_string(TemplateId id) { return id == TemplateId::PT1 ? "pt1" : "pt2"; }

std::string StrategySpec::clause() const {
  if (kind == Kind::Bcq)
    return "Follow the best-channel-quality rule: request every RU if you are one of the " +
           std::to_string(k) +
           " agents with the strongest overall channel, otherwise request none.";
  return "Maximize the total uplink rate of this round: prefer RUs where you are strong and "
         "spatially compatible with the other agents, and stay off RUs where stronger, more "
         "compatible agents should transmit.";
}

PromptTemplates PromptTemplates::builtin() { return {kTemplatePt1, kTemplatePt2}; }

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir) {
  return {read_file(dir / "pt1.txt"), read_file(dir / "pt2.txt")};
}

std::string render_template(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("${", pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      return out;
    }
    out.append(text, pos, open - pos);
    const std::size_t close = text.find('}', open + 2);
    if (close == std::string::npos)
      throw ConfigError("template: unterminated placeholder near offset " + std::to_string(open));
    const std::string key = text.substr(open + 2, close - open - 2);
    const auto hit = std::find_if(values.begin(), values.end(),
                                  [&](const auto& kv) { return kv.first == key; });
    if (hit == values.end()) throw ConfigError("template: unknown placeholder ${" + key + "}");
    out += hit->second;
    pos = close + 1;
  }
}

std::string render_feedback(const FeedbackStatus& status) {
  switch (status.kind) {
    case FeedbackStatus::Kind::Initial:
      return "This is the first round; there is no feedback yet.";
    case FeedbackStatus::Kind::ParseSuccess:
      return "Your previous response was parsed successfully.";
    case FeedbackStatus::Kind::ParseError:
      return "Your previous response could not be parsed (" + status.detail +
             "); you were assigned no RUs.";
    case FeedbackStatus::Kind::SelfCorrected: {
      std::string rus;
      for (std::size_t j = 0; j < status.revoked_rus.size(); ++j) {
        if (j) rus += ", ";
        rus += std::to_string(status.revoked_rus[j]);
      }
      return "Your previous assignment was revoked on RU(s) " + rus +
             " because too many agents selected them.";
    }
  }
  return {};
}

PromptBundle build_prompts(const std::vector<AgentObservation>& observations,
                           TemplateId template_id, const StrategySpec& strategy,
                           const WlanConfig& config, int slot,
                           const PromptTemplates& templates) {
  if (static_cast<int>(observations.size()) != config.n_stations)
    throw ValidationError("build_prompts: observation count does not match config");

  PromptBundle bundle;
  bundle.template_id = template_id;
  bundle.strategy = strategy;
  bundle.slot = slot;
  bundle.n_rus = config.n_rus;
  if (!observations.empty()) {
    bundle.zeta = observations.front().zeta;
    bundle.impact = observations.front().impact;
  }

  const SemanticAnalysis analysis =
      template_id == TemplateId::PT1
          ? semantic_analysis(bundle.zeta, bundle.impact, config)
          : SemanticAnalysis{};

  std::string channel_data;
  if (template_id == TemplateId::PT2) {
    for (int l = 0; l < config.n_rus; ++l) {
      channel_data += "RU " + std::to_string(l + 1) + ": [";
      for (int i = 0; i < config.n_stations; ++i) {
        if (i) channel_data += ", ";
        channel_data += format_number(bundle.zeta(i, l));
      }
      channel_data += "]";
      if (l + 1 < config.n_rus) channel_data += "\n";
    }
  }

  const int top = std::min(config.n_antennas, config.n_stations);
  bundle.prompts.reserve(observations.size());
  for (const AgentObservation& obs : observations) {
    const std::size_t i = static_cast<std::size_t>(obs.agent_index);
    const std::string agent = agent_name(obs.agent_index);
    std::vector<std::pair<std::string, std::string>> values = {
        {"agent_id", std::to_string(obs.agent_index + 1)},
        {"n_agents", std::to_string(config.n_stations)},
        {"n_antennas", std::to_string(config.n_antennas)},
        {"n_rus", std::to_string(config.n_rus)},
        {"slot", std::to_string(slot + 1)},
        {"strategy", strategy.clause()},
        {"feedback", render_feedback(obs.feedback)},
    };
    if (template_id == TemplateId::PT1) {
      values.emplace_back("strength_clause",
                          membership_clause(agent, analysis.is_strongest[i], top, "strongest"));
      values.emplace_back(
          "compatibility_clause",
          membership_clause(agent, analysis.is_most_compatible[i], top, "most compatible"));
      values.emplace_back("comparison_clause",
                          "There are " + std::to_string(analysis.dominating_agents[i]) +
                              " agents that are stronger and more compatible with others than " +
                              agent + ".");
    } else {
      values.emplace_back("channel_data", channel_data);
    }
    bundle.prompts.push_back(render_template(templates.text(template_id), values));
  }
  return bundle;
}

}  // namespace wiser
