#include "wm/timing.hpp"

#include "wm/encoding.hpp"
#include "wm/errors.hpp"
#include "wm/scoring.hpp"

namespace wm {

ValueTerms assistance_value(const AssistanceCandidate& candidate,
                            const WorkingMemoryState& state, const WeightsConfig& weights) {
    ValueTerms terms;
    terms.importance_term = candidate.importance;
    terms.relevance_term = score_relevance(candidate.embedding, state.episodic);
    terms.value = weights.value_importance_weight * terms.importance_term +
                  weights.value_relevance_weight * terms.relevance_term;
    return terms;
}

double displacement_cost(const WorkingMemoryState& state, const WeightsConfig& weights) {
    if (static_cast<int>(state.perception.size()) < weights.capacity_items) {
        return 0.0;
    }
    bool first = true;
    double minimum = 0.0;
    for (const auto& item : state.perception) {
        const double composite = score_item(item, state, weights).composite;
        if (first || composite < minimum) {
            minimum = composite;
            first = false;
        }
    }
    return minimum;
}

double interference_cost(const AssistanceCandidate& candidate, const WorkingMemoryState& state) {
    double sum = 0.0;
    int comparisons = 0;
    for (const auto& item : state.perception) {
        if (item.modality != candidate.modality) continue;
        sum += 1.0 - clamped_similarity(item.embedding, candidate.embedding);
        ++comparisons;
    }
    if (comparisons == 0) return 0.0;
    return sum / static_cast<double>(comparisons);
}

DecisionKind classify_utility(double utility, double utility_threshold) {
    if (utility > utility_threshold) return DecisionKind::Deliver;
    if (utility <= 0.0) return DecisionKind::Discard;
    return DecisionKind::Defer;
}

Decision evaluate(AssistanceCandidate& candidate, const WorkingMemoryState& state,
                  const WeightsConfig& weights) {
    if (state.now < candidate.created_at) {
        throw ContractViolation("candidate evaluated before its creation time");
    }
    const ValueTerms terms = assistance_value(candidate, state, weights);
    UtilityBreakdown breakdown;
    breakdown.at = state.now;
    breakdown.importance_term = terms.importance_term;
    breakdown.relevance_term = terms.relevance_term;
    breakdown.value = terms.value;
    breakdown.c_displacement = displacement_cost(state, weights);
    breakdown.c_interference = interference_cost(candidate, state);
    breakdown.utility = breakdown.value - (breakdown.c_displacement + breakdown.c_interference);
    breakdown.decision = classify_utility(breakdown.utility, weights.utility_threshold);
    candidate.evaluations.push_back(breakdown);
    return {breakdown.decision, breakdown};
}

Decision baseline_decide() { return {DecisionKind::Deliver, std::nullopt}; }

}  // namespace wm
