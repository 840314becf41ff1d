#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wm/errors.hpp"
#include "wm/types.hpp"

namespace wm {

// Which decision policy drives a run. The working-memory policy routes
// candidates through the timing predictor; the baseline delivers everything
// its generator produces.
enum class Policy { Wm, Baseline };

inline const char* to_string(Policy policy) {
    return policy == Policy::Wm ? "wm" : "baseline";
}

// One generated assistance message with the generator's importance estimate.
struct GeneratedAssistance {
    std::string message;     // non-empty
    double importance = 0.0; // [0,1]
};

// Provider interfaces replace the sensing/LLM stack: a text embedder, an
// importance scorer, an episode summarizer, and an assistance generator.
// Implementations either return a valid result or throw ProviderFailure.
// They must be stateless or internally synchronized; the bundled mocks are
// pure functions apart from replay-run bookkeeping.

class Embedder {
public:
    virtual ~Embedder() = default;
    // Unit vector of the configured dimension, deterministic for fixed
    // (content, modality, seed, dim). Empty content is malformed.
    virtual Embedding embed(std::string_view content, Modality modality) = 0;
};

class ImportanceScorer {
public:
    virtual ~ImportanceScorer() = default;
    // Context-independent value of the content, in [0,1]. Out-of-range
    // results surface as MalformedResponse, never a silent clamp.
    virtual double score(std::string_view content, std::string_view task_context) = 0;
};

class Summarizer {
public:
    virtual ~Summarizer() = default;
    // One short sentence capturing the member items. `items` is non-empty.
    virtual std::string summarize(const std::vector<const MemoryItem*>& items,
                                  std::string_view task_context) = 0;
};

class AssistanceGenerator {
public:
    virtual ~AssistanceGenerator() = default;
    // Zero or more candidates for the current update. `newest` is the item
    // affected by this update's encoding (null if encoding failed).
    // `delivered_history` holds previously delivered messages in order.
    virtual std::vector<GeneratedAssistance> generate(
        const WorkingMemoryState& state, const MemoryItem* newest,
        const std::vector<std::string>& delivered_history, Policy policy,
        std::string_view task_context) = 0;
};

// Non-owning bundle handed to the engine.
struct ProviderSet {
    Embedder* embedder = nullptr;
    ImportanceScorer* importance = nullptr;
    Summarizer* summarizer = nullptr;
    AssistanceGenerator* generator = nullptr;
};

}  // namespace wm
