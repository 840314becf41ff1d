#include "wm/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wm/errors.hpp"

namespace wm {

namespace {

void breach(const std::string& message) {
    throw ContractViolation("working-memory invariant breached: " + message);
}

void check_embedding(const Embedding& e, int dim, const std::string& what) {
    if (static_cast<int>(e.dimension()) != dim) {
        breach(what + " has dimension " + std::to_string(e.dimension()) +
               ", engine uses " + std::to_string(dim));
    }
    double sq = 0.0;
    for (double v : e.values()) sq += v * v;
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) breach(what + " is not unit-norm");
}

}  // namespace

const MemoryItem* WorkingMemoryState::find_item(ItemId id) const {
    for (const auto& item : perception)
        if (item.id == id) return &item;
    return nullptr;
}

MemoryItem* WorkingMemoryState::find_item(ItemId id) {
    for (auto& item : perception)
        if (item.id == id) return &item;
    return nullptr;
}

const MemoryChunk* WorkingMemoryState::find_chunk(ChunkId id) const {
    for (const auto& chunk : episodic)
        if (chunk.id == id) return &chunk;
    return nullptr;
}

MemoryChunk* WorkingMemoryState::find_chunk(ChunkId id) {
    for (auto& chunk : episodic)
        if (chunk.id == id) return &chunk;
    return nullptr;
}

const MemoryChunk* WorkingMemoryState::chunk_of(ItemId id) const {
    for (const auto& chunk : episodic) {
        if (std::find(chunk.item_ids.begin(), chunk.item_ids.end(), id) != chunk.item_ids.end())
            return &chunk;
    }
    return nullptr;
}

void validate_state(const WorkingMemoryState& state, const WeightsConfig& weights,
                    const std::vector<ItemId>& pending_unbound) {
    if (static_cast<int>(state.perception.size()) > weights.capacity_items) {
        breach("perception store exceeds capacity");
    }
    if (static_cast<int>(state.episodic.size()) > weights.capacity_chunks) {
        breach("episodic buffer exceeds capacity");
    }

    for (const auto& item : state.perception) {
        if (item.last_activated_at < item.encoded_at) {
            breach("item " + std::to_string(raw(item.id)) + " activated before encoding");
        }
        if (item.importance < 0.0 || item.importance > 1.0) {
            breach("item importance outside [0,1]");
        }
        if (item.last_activated_at > state.now) {
            breach("item activation is in the future");
        }
        check_embedding(item.embedding, weights.embedding_dim,
                        "item " + std::to_string(raw(item.id)) + " embedding");
    }

    for (const auto& chunk : state.episodic) {
        if (chunk.item_ids.empty()) {
            breach("chunk " + std::to_string(raw(chunk.id)) + " is empty");
        }
        check_embedding(chunk.summary_embedding, weights.embedding_dim,
                        "chunk " + std::to_string(raw(chunk.id)) + " summary embedding");
        for (ItemId member : chunk.item_ids) {
            if (!state.find_item(member)) {
                breach("chunk " + std::to_string(raw(chunk.id)) + " references missing item " +
                       std::to_string(raw(member)));
            }
        }
    }

    // Partition: every item lives in exactly one chunk, except those awaiting
    // a bind retry after a provider failure.
    for (const auto& item : state.perception) {
        int homes = 0;
        for (const auto& chunk : state.episodic) {
            homes += static_cast<int>(
                std::count(chunk.item_ids.begin(), chunk.item_ids.end(), item.id));
        }
        const bool pending = std::find(pending_unbound.begin(), pending_unbound.end(),
                                       item.id) != pending_unbound.end();
        if (pending) {
            if (homes != 0) breach("pending-unbound item is already chunked");
        } else if (homes != 1) {
            breach("item " + std::to_string(raw(item.id)) + " appears in " +
                   std::to_string(homes) + " chunks");
        }
    }
}

}  // namespace wm
