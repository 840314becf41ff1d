#pragma once

// Shared fixtures for the unit suites: hand-built states with exact
// similarity geometry, and randomized state generators for property tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wm/config.hpp"
#include "wm/types.hpp"

namespace test {

inline std::vector<double> basis(int dim, int axis) {
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(axis)] = 1.0;
    return v;
}

// Unit vector with cosine exactly `c` against basis axis `axis`, using
// `other` for the orthogonal rest.
inline std::vector<double> at_cosine(int dim, int axis, double c, int other) {
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(axis)] = c;
    v[static_cast<std::size_t>(other)] = std::sqrt(1.0 - c * c);
    return v;
}

inline wm::Embedding embed(std::vector<double> v) { return wm::Embedding(std::move(v)); }

inline wm::MemoryItem make_item(std::uint64_t id, wm::Modality modality, std::string content,
                                wm::Embedding embedding, double encoded_at,
                                double last_activated_at, double importance) {
    return {wm::ItemId{id},  modality,          std::move(content), std::move(embedding),
            encoded_at,      last_activated_at, importance};
}

inline wm::MemoryChunk make_chunk(std::uint64_t id, double created_at, std::string summary,
                                  wm::Embedding summary_embedding,
                                  std::vector<wm::ItemId> item_ids) {
    return {wm::ChunkId{id}, created_at, std::move(summary), std::move(summary_embedding),
            std::move(item_ids)};
}

inline std::vector<double> random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(dim));
    double sq = 0.0;
    do {
        sq = 0.0;
        for (auto& x : v) {
            x = gauss(rng);
            sq += x * x;
        }
    } while (sq < 1e-12);
    const double norm = std::sqrt(sq);
    for (auto& x : v) x /= norm;
    return v;
}

// A full random store (capacity_items items) partitioned into
// capacity_chunks chunks, with coherent timestamps. Embedding dimension is
// kept small for speed; the weights carry the matching dim.
struct RandomState {
    wm::WorkingMemoryState state;
    wm::WeightsConfig weights;
};

inline RandomState random_full_state(std::mt19937_64& rng, int dim = 8) {
    RandomState out;
    out.weights.embedding_dim = dim;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double now = 100.0 + unit(rng) * 100.0;
    out.state.now = now;

    const int item_count = out.weights.capacity_items;
    for (int i = 0; i < item_count; ++i) {
        const double encoded = unit(rng) * now;
        const double activated = encoded + unit(rng) * (now - encoded);
        out.state.perception.push_back(make_item(
            static_cast<std::uint64_t>(i + 1),
            unit(rng) < 0.5 ? wm::Modality::Visuospatial : wm::Modality::Phonological,
            "item-" + std::to_string(i + 1), embed(random_unit(rng, dim)), encoded, activated,
            unit(rng)));
    }

    // Partition items into exactly capacity_chunks non-empty chunks.
    const int chunk_count = out.weights.capacity_chunks;
    std::vector<int> assignment(static_cast<std::size_t>(item_count));
    for (int i = 0; i < chunk_count; ++i) assignment[static_cast<std::size_t>(i)] = i;
    std::uniform_int_distribution<int> pick(0, chunk_count - 1);
    for (int i = chunk_count; i < item_count; ++i) {
        assignment[static_cast<std::size_t>(i)] = pick(rng);
    }
    std::shuffle(assignment.begin(), assignment.end(), rng);
    // Reshuffle until every chunk is non-empty (7 items over 4 chunks, cheap).
    auto nonempty = [&] {
        std::vector<int> counts(static_cast<std::size_t>(chunk_count), 0);
        for (int a : assignment) ++counts[static_cast<std::size_t>(a)];
        for (int c : counts)
            if (c == 0) return false;
        return true;
    };
    while (!nonempty()) std::shuffle(assignment.begin(), assignment.end(), rng);

    for (int c = 0; c < chunk_count; ++c) {
        std::vector<wm::ItemId> members;
        for (int i = 0; i < item_count; ++i) {
            if (assignment[static_cast<std::size_t>(i)] == c) {
                members.push_back(out.state.perception[static_cast<std::size_t>(i)].id);
            }
        }
        out.state.episodic.push_back(make_chunk(static_cast<std::uint64_t>(c + 1),
                                                unit(rng) * now,
                                                "summary-" + std::to_string(c + 1),
                                                embed(random_unit(rng, dim)),
                                                std::move(members)));
    }
    return out;
}

}  // namespace test
