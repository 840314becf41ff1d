#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "wm/config.hpp"
#include "wm/embedding.hpp"

namespace wm {

// The two perception channels: objects seen vs speech heard.
enum class Modality { Visuospatial, Phonological };

inline const char* to_string(Modality m) {
    return m == Modality::Visuospatial ? "visuospatial" : "phonological";
}

enum class ItemId : std::uint64_t {};
enum class ChunkId : std::uint64_t {};
enum class CandidateId : std::uint64_t {};

constexpr std::uint64_t raw(ItemId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(ChunkId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(CandidateId id) { return static_cast<std::uint64_t>(id); }

// One perceived unit: a detected object label or a speech fragment.
struct MemoryItem {
    ItemId id{};
    Modality modality = Modality::Visuospatial;
    std::string content;
    Embedding embedding;
    double encoded_at = 0.0;
    double last_activated_at = 0.0;   // refreshed on duplicate detection
    double importance = 0.0;          // [0,1], frozen after encoding
};

// An episodic group of items with a generated summary. Summary and its
// embedding are regenerated whenever the chunk gains a member.
struct MemoryChunk {
    ChunkId id{};
    double created_at = 0.0;
    std::string summary;
    Embedding summary_embedding;
    std::vector<ItemId> item_ids;     // non-empty; members live in the perception store
};

// Per-item property scores at one evaluation instant.
struct PropertyScores {
    double recency = 0.0;
    double relevance = 0.0;
    double importance = 0.0;
    double composite = 0.0;
};

enum class DecisionKind { Deliver, Defer, Discard, Expire };

inline const char* to_string(DecisionKind kind) {
    switch (kind) {
        case DecisionKind::Deliver: return "deliver";
        case DecisionKind::Defer: return "defer";
        case DecisionKind::Discard: return "discard";
        case DecisionKind::Expire: return "expire";
    }
    return "discard";
}

// One utility evaluation of a candidate: value terms, costs, and the
// threshold-rule outcome.
struct UtilityBreakdown {
    double at = 0.0;                  // simulated seconds of the evaluation
    double importance_term = 0.0;
    double relevance_term = 0.0;
    double value = 0.0;               // w_importance*I + w_relevance*R
    double c_displacement = 0.0;
    double c_interference = 0.0;
    double utility = 0.0;             // value - (c_displacement + c_interference)
    DecisionKind decision = DecisionKind::Discard;
};

struct Decision {
    DecisionKind kind = DecisionKind::Discard;
    std::optional<UtilityBreakdown> breakdown;   // absent for Expire
};

// A generated assistance message awaiting (or past) a timing decision.
// Voice messages, so always phonological. Importance is frozen at
// generation; evaluations is append-only.
struct AssistanceCandidate {
    CandidateId id{};
    std::string message;
    Modality modality = Modality::Phonological;
    double importance = 0.0;
    Embedding embedding;              // of the message text
    double created_at = 0.0;
    std::vector<UtilityBreakdown> evaluations;
};

// The full mutable working-memory model.
struct WorkingMemoryState {
    std::vector<MemoryItem> perception;        // <= capacity_items
    std::vector<MemoryChunk> episodic;         // <= capacity_chunks
    std::deque<AssistanceCandidate> deferred;  // FIFO by creation time
    double now = 0.0;

    const MemoryItem* find_item(ItemId id) const;
    MemoryItem* find_item(ItemId id);
    const MemoryChunk* find_chunk(ChunkId id) const;
    MemoryChunk* find_chunk(ChunkId id);
    // Chunk currently holding `id`, or nullptr while the item awaits binding.
    const MemoryChunk* chunk_of(ItemId id) const;
};

// Structural invariant check: capacities, member liveness, the one-chunk-per-
// item partition, unit-norm embeddings of the configured dimension, and clock
// sanity. `pending_unbound` lists items legitimately awaiting (re)binding
// after a provider failure. Throws ContractViolation on the first breach.
void validate_state(const WorkingMemoryState& state, const WeightsConfig& weights,
                    const std::vector<ItemId>& pending_unbound = {});

}  // namespace wm
