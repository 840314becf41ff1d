#pragma once

#include <optional>
#include <vector>

#include "wm/config.hpp"
#include "wm/scoring.hpp"
#include "wm/types.hpp"

namespace wm {

struct ItemScoreEntry {
    ItemId id{};
    PropertyScores scores;
};

// Result of encoding one perceived unit into the perception store.
struct EncodeOutcome {
    enum class Kind { Added, Refreshed, Displaced };
    Kind kind = Kind::Added;
    ItemId item_id{};                       // inserted item, or the refreshed one
    std::optional<ItemId> displaced_id;     // victim, Displaced only
    // Scores of every stored item at decision time (pre-mutation).
    std::vector<ItemScoreEntry> scores_snapshot;
};

inline const char* to_string(EncodeOutcome::Kind kind) {
    switch (kind) {
        case EncodeOutcome::Kind::Added: return "added";
        case EncodeOutcome::Kind::Refreshed: return "refreshed";
        case EncodeOutcome::Kind::Displaced: return "displaced";
    }
    return "added";
}

// Same-modality duplicate lookup: the stored item with the highest clamped
// similarity strictly above `dedup_threshold`, ties going to the most
// recently activated item (then smallest id). Cross-modality items never
// match; a seen object and a spoken phrase are distinct memories.
std::optional<ItemId> detect_duplicate(const Embedding& embedding, Modality modality,
                                       const std::vector<MemoryItem>& perception,
                                       double dedup_threshold);

// Item minimizing the composite score at state.now. Ties break by oldest
// last_activated_at, then oldest encoded_at, then smallest id, so replays
// are deterministic. Requires a full store.
ItemId select_displacement_victim(const WorkingMemoryState& state, const WeightsConfig& weights);

}  // namespace wm
