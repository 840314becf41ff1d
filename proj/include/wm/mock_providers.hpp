#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wm/providers.hpp"

namespace wm {

// Deterministic stand-ins for the ML stack. With a fixed seed every output
// is a pure function of its inputs, which is what makes replays
// byte-reproducible.

// Hash-based text embedder. Tokenization: ASCII-lowercase, split on anything
// that is not alphanumeric (bytes >= 0x80 count as token characters). Each
// token seeds a SplitMix64 stream with fnv1a64(token bytes) XOR seed; the
// stream emits `dim` values in [-1,1). Token vectors are summed and the sum
// L2-normalized. Modality does not enter the hash: the embedding space is
// shared across channels, like the joint text/image space it stands in for.
class MockEmbedder final : public Embedder {
public:
    MockEmbedder(std::uint64_t seed, int dim) : seed_(seed), dim_(dim) {}

    Embedding embed(std::string_view content, Modality modality) override;

private:
    std::uint64_t seed_;
    int dim_;
};

// Exact hash primitives the embedder is specified against, exposed so tests
// (and ports to other languages) can pin them.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64_next(std::uint64_t& state);

// Returns the scenario-supplied ground-truth importance when one was set for
// the current event, else 0.5. The replay loop owns the ground-truth slot.
class MockImportanceScorer final : public ImportanceScorer {
public:
    double score(std::string_view content, std::string_view task_context) override;

    void set_ground_truth(std::optional<double> importance) { ground_truth_ = importance; }

private:
    std::optional<double> ground_truth_;
};

// Template summary: "User context: {member labels joined by comma}", labels
// ordered by item id so summaries are reproducible.
class MockSummarizer final : public Summarizer {
public:
    std::string summarize(const std::vector<const MemoryItem*>& items,
                          std::string_view task_context) override;
};

// Emits scenario-scripted hints. Hints accumulate into a registry as their
// events are processed; a hint fires once, on the first update where its
// trigger is contained (case-insensitively) in any perception-store item.
class MockAssistanceGenerator final : public AssistanceGenerator {
public:
    struct Hint {
        std::string trigger;
        std::string message;
        double importance = 0.0;
        bool emitted = false;
    };

    void register_hint(std::string trigger, std::string message, double importance);

    std::vector<GeneratedAssistance> generate(const WorkingMemoryState& state,
                                              const MemoryItem* newest,
                                              const std::vector<std::string>& delivered_history,
                                              Policy policy,
                                              std::string_view task_context) override;

private:
    std::vector<Hint> hints_;
};

// Owning bundle of the four mocks plus the ProviderSet view over them.
struct MockProviders {
    MockProviders(std::uint64_t seed, int dim) : embedder(seed, dim) {}

    MockEmbedder embedder;
    MockImportanceScorer importance;
    MockSummarizer summarizer;
    MockAssistanceGenerator generator;

    ProviderSet set() { return {&embedder, &importance, &summarizer, &generator}; }
};

}  // namespace wm
