#include "wm/scoring.hpp"

#include "wm/errors.hpp"

namespace wm {

double score_recency(const MemoryItem& item, double now, double retention_seconds) {
    if (now < item.last_activated_at) {
        throw ContractViolation("recency scored before the item's last activation (clock must be monotone)");
    }
    const double decayed = 1.0 - (now - item.last_activated_at) / retention_seconds;
    return decayed < 0.0 ? 0.0 : decayed;
}

double score_relevance(const Embedding& embedding, const std::vector<MemoryChunk>& episodic) {
    if (episodic.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& chunk : episodic) {
        sum += clamped_similarity(embedding, chunk.summary_embedding);
    }
    return sum / static_cast<double>(episodic.size());
}

double composite_score(double recency, double relevance, double importance,
                       const WeightsConfig& weights) {
    return weights.recency_weight * recency + weights.relevance_weight * relevance +
           weights.importance_weight * importance;
}

PropertyScores score_item(const MemoryItem& item, const WorkingMemoryState& state,
                          const WeightsConfig& weights) {
    PropertyScores scores;
    scores.recency = score_recency(item, state.now, weights.retention_seconds);
    scores.relevance = score_relevance(item.embedding, state.episodic);
    scores.importance = item.importance;
    scores.composite =
        composite_score(scores.recency, scores.relevance, scores.importance, weights);
    return scores;
}

}  // namespace wm
