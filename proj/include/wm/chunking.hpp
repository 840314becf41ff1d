#pragma once

#include <optional>
#include <vector>

#include "wm/config.hpp"
#include "wm/types.hpp"

namespace wm {

struct ChunkScoreEntry {
    ChunkId id{};
    double score = 0.0;
};

// Result of binding a newly encoded item into the episodic buffer.
struct BindOutcome {
    enum class Kind { Bound, Created, CreatedWithDisplacement };
    Kind kind = Kind::Created;
    ChunkId chunk_id{};                      // chunk bound to, or the created one
    std::optional<double> score;             // binding score, Bound only
    std::optional<ChunkId> evicted_id;       // CreatedWithDisplacement only
    // Per-chunk binding scores at decision time.
    std::vector<ChunkScoreEntry> candidate_scores;
};

inline const char* to_string(BindOutcome::Kind kind) {
    switch (kind) {
        case BindOutcome::Kind::Bound: return "bound";
        case BindOutcome::Kind::Created: return "created";
        case BindOutcome::Kind::CreatedWithDisplacement: return "created_with_displacement";
    }
    return "created";
}

// lambda * similarity(item, summary) + (1-lambda) * mean similarity(item,
// member) over the chunk's items. The summary term weighs task-level
// coherence above item-level overlap. Requires a non-empty chunk with live
// members.
double binding_score(const MemoryItem& item, const MemoryChunk& chunk,
                     const WorkingMemoryState& state, double binding_weight);

// Arithmetic mean of the members' composite scores at state.now. This is
// the chunk-eviction ranking.
double chunk_mean_composite(const MemoryChunk& chunk, const WorkingMemoryState& state,
                            const WeightsConfig& weights);

// Chunk minimizing chunk_mean_composite; ties break by oldest created_at,
// then smallest id. Requires a full buffer.
ChunkId select_eviction_victim(const WorkingMemoryState& state, const WeightsConfig& weights);

}  // namespace wm
