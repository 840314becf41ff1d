#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace wm {

// Engine weights and limits. Members are role-named; the JSON keys follow
// the external config-file schema ("alpha", "lambda", "T", ...).
struct WeightsConfig {
    double recency_weight = 0.3;            // alpha
    double relevance_weight = 0.4;          // beta
    double importance_weight = 0.3;         // gamma
    double binding_weight = 0.6;            // lambda
    double binding_threshold = 0.5;         // theta
    double retention_seconds = 30.0;        // T
    double value_importance_weight = 0.6;   // w_importance
    double value_relevance_weight = 0.4;    // w_relevance
    double utility_threshold = 0.75;
    double dedup_threshold = 0.95;
    int capacity_items = 7;
    int capacity_chunks = 4;
    int embedding_dim = 64;
    double defer_ttl_seconds = 60.0;        // JSON null means no expiry
    std::uint64_t seed = 0;

    // Throws ConfigError on any violated invariant.
    void validate() const;
};

enum class ProviderMode { Mock, Remote };

struct ProviderConfig {
    ProviderMode mode = ProviderMode::Mock;
    std::string endpoint;        // base URL, remote mode only
    double timeout_seconds = 10.0;
};

struct RunConfig {
    WeightsConfig weights;
    ProviderConfig provider;
};

// Applies a JSON object of WeightsConfig keys onto `weights`. Unknown keys
// are rejected. Used for both the config file's top level and a scenario's
// config_overrides.
void apply_weight_overrides(WeightsConfig& weights, const nlohmann::json& object);

// Loads a full config file: WeightsConfig keys at the top level plus an
// optional "provider" section. Validates the result.
RunConfig load_config_file(const std::string& path);

// Parses config-file JSON already in memory (shared by load_config_file).
RunConfig parse_config(const nlohmann::json& object);

nlohmann::json to_json(const WeightsConfig& weights);

}  // namespace wm
