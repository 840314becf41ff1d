#include "wm/encoding.hpp"

#include "wm/errors.hpp"

namespace wm {

std::optional<ItemId> detect_duplicate(const Embedding& embedding, Modality modality,
                                       const std::vector<MemoryItem>& perception,
                                       double dedup_threshold) {
    const MemoryItem* best = nullptr;
    double best_similarity = -1.0;
    for (const auto& item : perception) {
        if (item.modality != modality) continue;
        const double similarity = clamped_similarity(embedding, item.embedding);
        const bool wins =
            !best || similarity > best_similarity ||
            (similarity == best_similarity &&
             (item.last_activated_at > best->last_activated_at ||
              (item.last_activated_at == best->last_activated_at && item.id < best->id)));
        if (wins) {
            best = &item;
            best_similarity = similarity;
        }
    }
    if (best && best_similarity > dedup_threshold) return best->id;
    return std::nullopt;
}

ItemId select_displacement_victim(const WorkingMemoryState& state, const WeightsConfig& weights) {
    if (static_cast<int>(state.perception.size()) < weights.capacity_items) {
        throw ContractViolation("displacement victim requested while the store has free slots");
    }
    const MemoryItem* victim = nullptr;
    double victim_score = 0.0;
    for (const auto& item : state.perception) {
        const double score = score_item(item, state, weights).composite;
        const bool wins =
            !victim || score < victim_score ||
            (score == victim_score &&
             (item.last_activated_at < victim->last_activated_at ||
              (item.last_activated_at == victim->last_activated_at &&
               (item.encoded_at < victim->encoded_at ||
                (item.encoded_at == victim->encoded_at && item.id < victim->id)))));
        if (wins) {
            victim = &item;
            victim_score = score;
        }
    }
    return victim->id;
}

}  // namespace wm
