#pragma once

#include <string>

#include <json.hpp>

#include "wm/config.hpp"
#include "wm/providers.hpp"

namespace wm {

// Minimal JSON-over-HTTP provider client. Requests are
//   POST <endpoint path>  {"template": <id>, "fields": {...}}
// and responses must match the documented per-template shapes. One attempt
// per call, no retries; failures map to Timeout / Unavailable /
// MalformedResponse.
class RemoteClient {
public:
    RemoteClient(std::string endpoint, double timeout_seconds);

    nlohmann::json call(const std::string& template_id, nlohmann::json fields);
    // Raw response body, for templates whose reply is plain text.
    std::string call_text(const std::string& template_id, nlohmann::json fields);

private:
    std::string post(const std::string& template_id, nlohmann::json fields);

    std::string base_url_;
    std::string path_;
    double timeout_seconds_;
};

class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(RemoteClient& client, int dim) : client_(client), dim_(dim) {}
    Embedding embed(std::string_view content, Modality modality) override;

private:
    RemoteClient& client_;
    int dim_;
};

class RemoteImportanceScorer final : public ImportanceScorer {
public:
    explicit RemoteImportanceScorer(RemoteClient& client) : client_(client) {}
    double score(std::string_view content, std::string_view task_context) override;

private:
    RemoteClient& client_;
};

class RemoteSummarizer final : public Summarizer {
public:
    explicit RemoteSummarizer(RemoteClient& client) : client_(client) {}
    std::string summarize(const std::vector<const MemoryItem*>& items,
                          std::string_view task_context) override;

private:
    RemoteClient& client_;
};

class RemoteAssistanceGenerator final : public AssistanceGenerator {
public:
    explicit RemoteAssistanceGenerator(RemoteClient& client) : client_(client) {}
    std::vector<GeneratedAssistance> generate(const WorkingMemoryState& state,
                                              const MemoryItem* newest,
                                              const std::vector<std::string>& delivered_history,
                                              Policy policy,
                                              std::string_view task_context) override;

private:
    RemoteClient& client_;
};

struct RemoteProviders {
    RemoteProviders(const ProviderConfig& provider, int dim)
        : client(provider.endpoint, provider.timeout_seconds),
          embedder(client, dim),
          importance(client),
          summarizer(client),
          generator(client) {}

    RemoteClient client;
    RemoteEmbedder embedder;
    RemoteImportanceScorer importance;
    RemoteSummarizer summarizer;
    RemoteAssistanceGenerator generator;

    ProviderSet set() { return {&embedder, &importance, &summarizer, &generator}; }
};

}  // namespace wm
