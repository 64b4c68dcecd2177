#pragma once

#include <vector>

#include "wiser/allocation.hpp"
#include "wiser/types.hpp"

namespace wiser {

/// Impact factors eta (N x R): for agent i, the share of RU l in the other
/// agents' gains relative to agent i's own, scaled so each row sums to R.
/// relative_load keeps the per-agent normalizer (sum over RUs and other
/// agents of zeta_k / zeta_i); a low value means the others are weak where
/// this agent is strong, which is the compatibility ranking key.
struct ImpactMatrix {
  Eigen::MatrixXd eta;
  Eigen::VectorXd relative_load;
};

ImpactMatrix impact_factors(const GainMatrix& zeta, const WlanConfig& config);

/// One agent's view of the slot: the shared gain and impact matrices plus
/// its own feedback from the previous slot.
struct AgentObservation {
  int agent_index = 0;
  GainMatrix zeta;
  ImpactMatrix impact;
  FeedbackStatus feedback;
};

std::vector<AgentObservation> make_observations(const GainMatrix& zeta,
                                                const ImpactMatrix& impact,
                                                const std::vector<FeedbackStatus>& prev_feedback);

/// Slot-level agent ranking used by the semantic prompt template.
/// Strength ranks total gain (higher is better); compatibility ranks
/// relative_load (lower is better). Ties go to the lower station index.
struct SemanticAnalysis {
  std::vector<bool> is_strongest;        ///< among the M strongest agents
  std::vector<bool> is_most_compatible;  ///< among the M most compatible agents
  std::vector<int> dominating_agents;    ///< x_i: agents strictly stronger AND more compatible
};

SemanticAnalysis semantic_analysis(const GainMatrix& zeta, const ImpactMatrix& impact,
                                   const WlanConfig& config);

}  // namespace wiser
