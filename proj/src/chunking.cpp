#include "wm/chunking.hpp"

#include "wm/errors.hpp"
#include "wm/scoring.hpp"

namespace wm {

double binding_score(const MemoryItem& item, const MemoryChunk& chunk,
                     const WorkingMemoryState& state, double binding_weight) {
    if (chunk.item_ids.empty()) {
        throw ContractViolation("binding score against an empty chunk");
    }
    const double episode_similarity = clamped_similarity(item.embedding, chunk.summary_embedding);
    double member_sum = 0.0;
    for (ItemId member_id : chunk.item_ids) {
        const MemoryItem* member = state.find_item(member_id);
        if (!member) {
            throw ContractViolation("chunk member missing from the perception store");
        }
        member_sum += clamped_similarity(item.embedding, member->embedding);
    }
    const double item_similarity = member_sum / static_cast<double>(chunk.item_ids.size());
    return binding_weight * episode_similarity + (1.0 - binding_weight) * item_similarity;
}

double chunk_mean_composite(const MemoryChunk& chunk, const WorkingMemoryState& state,
                            const WeightsConfig& weights) {
    if (chunk.item_ids.empty()) {
        throw ContractViolation("mean composite of an empty chunk");
    }
    double sum = 0.0;
    for (ItemId member_id : chunk.item_ids) {
        const MemoryItem* member = state.find_item(member_id);
        if (!member) {
            throw ContractViolation("chunk member missing from the perception store");
        }
        sum += score_item(*member, state, weights).composite;
    }
    return sum / static_cast<double>(chunk.item_ids.size());
}

ChunkId select_eviction_victim(const WorkingMemoryState& state, const WeightsConfig& weights) {
    if (static_cast<int>(state.episodic.size()) < weights.capacity_chunks) {
        throw ContractViolation("chunk eviction requested while the buffer has free slots");
    }
    const MemoryChunk* victim = nullptr;
    double victim_score = 0.0;
    for (const auto& chunk : state.episodic) {
        const double score = chunk_mean_composite(chunk, state, weights);
        const bool wins = !victim || score < victim_score ||
                          (score == victim_score &&
                           (chunk.created_at < victim->created_at ||
                            (chunk.created_at == victim->created_at && chunk.id < victim->id)));
        if (wins) {
            victim = &chunk;
            victim_score = score;
        }
    }
    return victim->id;
}

}  // namespace wm
