#include "wm/remote_providers.hpp"

#include <chrono>

#include <httplib.h>

namespace wm {

namespace {

[[noreturn]] void malformed(const std::string& detail) {
    throw ProviderFailure({ProviderErrorKind::MalformedResponse, detail});
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

RemoteClient::RemoteClient(std::string endpoint, double timeout_seconds)
    : timeout_seconds_(timeout_seconds) {
    // Split "scheme://host:port/path" into base URL and request path.
    const auto scheme_end = endpoint.find("://");
    const auto path_start =
        endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = std::move(endpoint);
        path_ = "/provider";
    } else {
        base_url_ = endpoint.substr(0, path_start);
        path_ = endpoint.substr(path_start);
    }
}

std::string RemoteClient::post(const std::string& template_id, nlohmann::json fields) {
    httplib::Client client(base_url_);
    const auto timeout = std::chrono::milliseconds(
        static_cast<long long>(timeout_seconds_ * 1000.0));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const nlohmann::json request{{"template", template_id}, {"fields", std::move(fields)}};
    auto result = client.Post(path_, request.dump(), "application/json");
    if (!result) {
        const auto error = result.error();
        if (error == httplib::Error::ConnectionTimeout || error == httplib::Error::Read ||
            error == httplib::Error::Write) {
            throw ProviderFailure({ProviderErrorKind::Timeout,
                                   "provider call timed out: " + httplib::to_string(error)});
        }
        throw ProviderFailure({ProviderErrorKind::Unavailable,
                               "provider unreachable: " + httplib::to_string(error)});
    }
    if (result->status != 200) {
        throw ProviderFailure({ProviderErrorKind::Unavailable,
                               "provider returned HTTP " + std::to_string(result->status)});
    }
    return result->body;
}

nlohmann::json RemoteClient::call(const std::string& template_id, nlohmann::json fields) {
    const std::string body = post(template_id, std::move(fields));
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(std::string("response is not valid JSON: ") + e.what());
    }
}

std::string RemoteClient::call_text(const std::string& template_id, nlohmann::json fields) {
    return post(template_id, std::move(fields));
}

Embedding RemoteEmbedder::embed(std::string_view content, Modality modality) {
    if (content.empty()) malformed("cannot embed empty content");
    const auto response = client_.call("embed", {{"content", std::string(content)},
                                                 {"modality", to_string(modality)},
                                                 {"dim", dim_}});
    if (!response.is_object() || !response.contains("embedding") ||
        !response["embedding"].is_array()) {
        malformed("embed response missing \"embedding\" array");
    }
    std::vector<double> values;
    values.reserve(response["embedding"].size());
    for (const auto& component : response["embedding"]) {
        if (!component.is_number()) malformed("embedding components must be numbers");
        values.push_back(component.get<double>());
    }
    if (static_cast<int>(values.size()) != dim_) {
        malformed("embedding has dimension " + std::to_string(values.size()) + ", expected " +
                  std::to_string(dim_));
    }
    try {
        return Embedding(std::move(values));
    } catch (const ContractViolation& e) {
        malformed(e.what());
    }
}

double RemoteImportanceScorer::score(std::string_view content, std::string_view task_context) {
    const auto response = client_.call("importance", {{"content", std::string(content)},
                                                      {"task_context", std::string(task_context)}});
    if (!response.is_object() || !response.contains("perception_memory") ||
        !response["perception_memory"].is_array() || response["perception_memory"].empty() ||
        !response["perception_memory"][0].is_number()) {
        malformed("importance response missing perception_memory scores");
    }
    const double value = response["perception_memory"][0].get<double>();
    if (!(value >= 0.0 && value <= 1.0)) {
        // Out-of-range scores are rejected, never clamped.
        malformed("importance score " + std::to_string(value) + " outside [0,1]");
    }
    return value;
}

std::string RemoteSummarizer::summarize(const std::vector<const MemoryItem*>& items,
                                        std::string_view task_context) {
    if (items.empty()) throw ContractViolation("summarize requires at least one memory item");
    nlohmann::json members = nlohmann::json::array();
    for (const MemoryItem* item : items) {
        members.push_back({{"modality", to_string(item->modality)}, {"content", item->content}});
    }
    const auto response = client_.call(
        "episode_summary",
        {{"items", std::move(members)}, {"task_context", std::string(task_context)}});
    if (!response.is_object() || !response.contains("episode") || !response["episode"].is_string() ||
        response["episode"].get<std::string>().empty()) {
        malformed("summary response missing non-empty \"episode\"");
    }
    return response["episode"].get<std::string>();
}

std::vector<GeneratedAssistance> RemoteAssistanceGenerator::generate(
    const WorkingMemoryState& state, const MemoryItem* newest,
    const std::vector<std::string>& delivered_history, Policy policy,
    std::string_view task_context) {
    nlohmann::json newest_field = nullptr;
    if (newest) {
        newest_field = {{"modality", to_string(newest->modality)}, {"content", newest->content}};
    }
    nlohmann::json episodes = nlohmann::json::array();
    for (const auto& chunk : state.episodic) episodes.push_back(chunk.summary);

    if (policy == Policy::Baseline) {
        // Baseline replies with a bare sentence or the NO ASSISTANCE marker.
        const std::string body = trim(client_.call_text(
            "baseline_assistance",
            {{"information", std::move(newest_field)},
             {"history", delivered_history},
             {"task_context", std::string(task_context)}}));
        if (body.empty() || body == "NO ASSISTANCE") return {};
        return {{body, 0.5}};
    }

    const auto response = client_.call("assistance",
                                       {{"newest", std::move(newest_field)},
                                        {"episodes", std::move(episodes)},
                                        {"history", delivered_history},
                                        {"task_context", std::string(task_context)}});
    if (!response.is_object() || !response.contains("assistance_messages") ||
        !response["assistance_messages"].is_array()) {
        malformed("assistance response missing \"assistance_messages\" array");
    }
    std::vector<GeneratedAssistance> out;
    for (const auto& entry : response["assistance_messages"]) {
        if (!entry.is_object() || !entry.contains("message") || !entry["message"].is_string() ||
            entry["message"].get<std::string>().empty() || !entry.contains("importance") ||
            !entry["importance"].is_number()) {
            malformed("assistance message entries need a message and an importance");
        }
        const double importance = entry["importance"].get<double>();
        if (!(importance >= 0.0 && importance <= 1.0)) {
            malformed("assistance importance outside [0,1]");
        }
        out.push_back({entry["message"].get<std::string>(), importance});
    }
    return out;
}

}  // namespace wm
