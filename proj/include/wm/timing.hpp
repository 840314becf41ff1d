#pragma once

#include "wm/config.hpp"
#include "wm/types.hpp"

namespace wm {

struct ValueTerms {
    double value = 0.0;
    double importance_term = 0.0;
    double relevance_term = 0.0;
};

// Predicted value of delivering a candidate: w_importance*I + w_relevance*R,
// where I is the candidate's frozen importance and R its relevance against
// the current episode summaries. Recency is excluded; a delivered message
// would be maximally fresh by construction.
ValueTerms assistance_value(const AssistanceCandidate& candidate,
                            const WorkingMemoryState& state, const WeightsConfig& weights);

// Composite score of the item a delivery would displace: 0 while a free slot
// exists (nothing is displaced), otherwise the minimum composite over the
// store at state.now.
double displacement_cost(const WorkingMemoryState& state, const WeightsConfig& weights);

// Mean dissimilarity (1 - clamped similarity) between the candidate and the
// same-modality items it would compete with; 0 when no modality overlap
// exists. Normalized by the comparison count so it stays in [0,1].
double interference_cost(const AssistanceCandidate& candidate, const WorkingMemoryState& state);

// The threshold rule: utility above the threshold delivers, non-positive
// utility discards, anything between defers. Boundaries are strict on both
// ends: utility == threshold defers, utility == 0 discards.
DecisionKind classify_utility(double utility, double utility_threshold);

// Full utility computation for a candidate at state.now. Appends the
// breakdown to candidate.evaluations and returns it with the decision.
Decision evaluate(AssistanceCandidate& candidate, const WorkingMemoryState& state,
                  const WeightsConfig& weights);

// Deliver-on-generation rule of the baseline condition: any generated
// message is delivered, with no utility computation or deferral.
Decision baseline_decide();

}  // namespace wm
