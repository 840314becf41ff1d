#pragma once

#include "wm/config.hpp"
#include "wm/types.hpp"

namespace wm {

// Linear freshness since last activation: max(0, 1 - elapsed/T).
// Clamped at zero past T so the composite stays in [0,1].
// Throws ContractViolation if now precedes the last activation.
double score_recency(const MemoryItem& item, double now, double retention_seconds);

// Mean clamped cosine similarity between an embedding and every episode
// summary. An empty buffer yields 0: nothing exists to be relevant to.
double score_relevance(const Embedding& embedding, const std::vector<MemoryChunk>& episodic);

// alpha*recency + beta*relevance + gamma*importance, in [0,1] since the
// weights sum to 1.
double composite_score(double recency, double relevance, double importance,
                       const WeightsConfig& weights);

// All three properties plus the composite for one item at state.now.
PropertyScores score_item(const MemoryItem& item, const WorkingMemoryState& state,
                          const WeightsConfig& weights);

}  // namespace wm
