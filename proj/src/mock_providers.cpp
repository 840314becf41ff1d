#include "wm/mock_providers.hpp"

#include <algorithm>
#include <cctype>

namespace wm {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

bool is_token_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

std::vector<std::string> tokenize(std::string_view content) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : content) {
        if (is_token_byte(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

Embedding MockEmbedder::embed(std::string_view content, Modality) {
    if (content.empty()) {
        throw ProviderFailure({ProviderErrorKind::MalformedResponse, "cannot embed empty content"});
    }
    const auto tokens = tokenize(content);
    if (tokens.empty()) {
        throw ProviderFailure(
            {ProviderErrorKind::MalformedResponse, "content has no tokens to embed"});
    }
    std::vector<double> sum(static_cast<std::size_t>(dim_), 0.0);
    for (const auto& token : tokens) {
        std::uint64_t state = fnv1a64(token) ^ seed_;
        for (double& component : sum) {
            const std::uint64_t bits = splitmix64_next(state);
            // top 53 bits -> [0,1), rescaled to [-1,1)
            component += static_cast<double>(bits >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        }
    }
    return Embedding(std::move(sum));
}

double MockImportanceScorer::score(std::string_view, std::string_view) {
    return ground_truth_.value_or(0.5);
}

std::string MockSummarizer::summarize(const std::vector<const MemoryItem*>& items,
                                      std::string_view) {
    if (items.empty()) {
        throw ContractViolation("summarize requires at least one memory item");
    }
    std::vector<const MemoryItem*> ordered(items);
    std::sort(ordered.begin(), ordered.end(),
              [](const MemoryItem* a, const MemoryItem* b) { return a->id < b->id; });
    std::string summary = "User context: ";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        if (i > 0) summary += ", ";
        summary += ordered[i]->content;
    }
    return summary;
}

void MockAssistanceGenerator::register_hint(std::string trigger, std::string message,
                                            double importance) {
    hints_.push_back({std::move(trigger), std::move(message), importance, false});
}

std::vector<GeneratedAssistance> MockAssistanceGenerator::generate(
    const WorkingMemoryState& state, const MemoryItem*, const std::vector<std::string>&,
    Policy, std::string_view) {
    std::vector<GeneratedAssistance> out;
    for (auto& hint : hints_) {
        if (hint.emitted) continue;
        const std::string needle = lowercase(hint.trigger);
        const bool triggered =
            std::any_of(state.perception.begin(), state.perception.end(),
                        [&needle](const MemoryItem& item) {
                            return lowercase(item.content).find(needle) != std::string::npos;
                        });
        if (triggered) {
            hint.emitted = true;
            out.push_back({hint.message, hint.importance});
        }
    }
    return out;
}

}  // namespace wm
