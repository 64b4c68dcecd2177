#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wiser/observation.hpp"
#include "wiser/types.hpp"

namespace wiser {

enum class TemplateId { PT1, PT2 };

TemplateId template_id_from_string(const std::string& name);  // "pt1" / "pt2"
std::string to_string(TemplateId id);

/// Strategy statement injected into every prompt: either follow the
/// best-channel-quality rule or maximize the rate-sum by weighing strength
/// and compatibility.
struct StrategySpec {
  enum class Kind { Bcq, RateMax };
  Kind kind = Kind::RateMax;
  int k = 0;  ///< Bcq only

  std::string clause() const;
  static StrategySpec rate_max() { return {}; }
  static StrategySpec bcq(int k) { return {Kind::Bcq, k}; }
};

/// Prompt wording lives in template files with ${name} placeholders so
/// experiments can pin it as data. The built-in text mirrors the files
/// shipped under data/templates/.
struct PromptTemplates {
  std::string pt1;
  std::string pt2;

  static PromptTemplates builtin();
  static PromptTemplates load_dir(const std::filesystem::path& dir);

  const std::string& text(TemplateId id) const { return id == TemplateId::PT1 ? pt1 : pt2; }
};

/// Substitutes ${key} placeholders; throws ConfigError on any placeholder
/// missing from `values` (unknown placeholders never pass silently).
std::string render_template(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& values);

/// The N per-agent prompts of one slot plus the observation snapshot they
/// were rendered from (mock backends and logs read the snapshot).
struct PromptBundle {
  TemplateId template_id = TemplateId::PT1;
  StrategySpec strategy;
  int slot = 0;
  int n_rus = 0;
  std::vector<std::string> prompts;  ///< index = agent index
  GainMatrix zeta;
  ImpactMatrix impact;
};

/// Renders one prompt per agent. PT1 injects the semantic analysis of the
/// agent's attributes; PT2 injects the per-RU numeric gain arrays. Both
/// name the agent, the RU/antenna counts, the strategy, the previous
/// feedback, and the required JSON output schema.
PromptBundle build_prompts(const std::vector<AgentObservation>& observations,
                           TemplateId template_id, const StrategySpec& strategy,
                           const WlanConfig& config, int slot = 0,
                           const PromptTemplates& templates = PromptTemplates::builtin());

/// Fixed one-line clause for each feedback variant.
std::string render_feedback(const FeedbackStatus& status);

}  // namespace wiser
