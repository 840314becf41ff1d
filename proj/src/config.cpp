#include "wm/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "wm/errors.hpp"

namespace wm {

namespace {

void fail(const std::string& message) { throw ConfigError("invalid config: " + message); }

double require_number(const nlohmann::json& v, const char* key) {
    if (!v.is_number()) fail(std::string(key) + " must be a number");
    return v.get<double>();
}

int require_int(const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer()) fail(std::string(key) + " must be an integer");
    return v.get<int>();
}

}  // namespace

void WeightsConfig::validate() const {
    const double weight_sum = recency_weight + relevance_weight + importance_weight;
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        fail("alpha + beta + gamma must equal 1 (got " + std::to_string(weight_sum) + ")");
    }
    if (recency_weight < 0.0 || relevance_weight < 0.0 || importance_weight < 0.0) {
        fail("alpha, beta, gamma must be non-negative");
    }
    if (binding_weight < 0.0 || binding_weight > 1.0) fail("lambda must be in [0,1]");
    if (binding_threshold < 0.0 || binding_threshold > 1.0) fail("theta must be in [0,1]");
    if (dedup_threshold < 0.0 || dedup_threshold > 1.0) fail("dedup_threshold must be in [0,1]");
    if (!(retention_seconds > 0.0)) fail("T must be > 0");
    if (std::isnan(defer_ttl_seconds) || defer_ttl_seconds < 0.0) fail("defer_ttl must be >= 0");
    if (capacity_items < 1) fail("capacity_items must be >= 1");
    if (capacity_chunks < 1) fail("capacity_chunks must be >= 1");
    if (embedding_dim < 1) fail("embedding_dim must be >= 1");
    if (value_importance_weight < 0.0 || value_relevance_weight < 0.0) {
        fail("w_importance and w_relevance must be non-negative");
    }
}

void apply_weight_overrides(WeightsConfig& weights, const nlohmann::json& object) {
    if (!object.is_object()) fail("expected a JSON object of config keys");
    for (const auto& [key, value] : object.items()) {
        if (key == "alpha") weights.recency_weight = require_number(value, "alpha");
        else if (key == "beta") weights.relevance_weight = require_number(value, "beta");
        else if (key == "gamma") weights.importance_weight = require_number(value, "gamma");
        else if (key == "lambda") weights.binding_weight = require_number(value, "lambda");
        else if (key == "theta") weights.binding_threshold = require_number(value, "theta");
        else if (key == "T") weights.retention_seconds = require_number(value, "T");
        else if (key == "w_importance") weights.value_importance_weight = require_number(value, "w_importance");
        else if (key == "w_relevance") weights.value_relevance_weight = require_number(value, "w_relevance");
        else if (key == "utility_threshold") weights.utility_threshold = require_number(value, "utility_threshold");
        else if (key == "dedup_threshold") weights.dedup_threshold = require_number(value, "dedup_threshold");
        else if (key == "capacity_items") weights.capacity_items = require_int(value, "capacity_items");
        else if (key == "capacity_chunks") weights.capacity_chunks = require_int(value, "capacity_chunks");
        else if (key == "embedding_dim") weights.embedding_dim = require_int(value, "embedding_dim");
        else if (key == "defer_ttl") {
            // null disables deferred-queue expiry entirely
            if (value.is_null()) weights.defer_ttl_seconds = std::numeric_limits<double>::infinity();
            else weights.defer_ttl_seconds = require_number(value, "defer_ttl");
        } else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer()) fail("seed must be an integer");
            weights.seed = value.get<std::uint64_t>();
        } else {
            fail("unknown key \"" + key + "\"");
        }
    }
}

RunConfig parse_config(const nlohmann::json& object) {
    if (!object.is_object()) fail("config file must contain a JSON object");
    RunConfig config;
    nlohmann::json weight_keys = nlohmann::json::object();
    for (const auto& [key, value] : object.items()) {
        if (key == "provider") {
            if (!value.is_object()) fail("provider section must be an object");
            for (const auto& [pkey, pvalue] : value.items()) {
                if (pkey == "mode") {
                    const std::string mode = pvalue.is_string() ? pvalue.get<std::string>() : "";
                    if (mode == "mock") config.provider.mode = ProviderMode::Mock;
                    else if (mode == "remote") config.provider.mode = ProviderMode::Remote;
                    else fail("provider.mode must be \"mock\" or \"remote\"");
                } else if (pkey == "endpoint") {
                    if (!pvalue.is_string()) fail("provider.endpoint must be a string");
                    config.provider.endpoint = pvalue.get<std::string>();
                } else if (pkey == "timeout_s") {
                    config.provider.timeout_seconds = require_number(pvalue, "provider.timeout_s");
                    if (!(config.provider.timeout_seconds > 0.0)) fail("provider.timeout_s must be > 0");
                } else {
                    fail("unknown provider key \"" + pkey + "\"");
                }
            }
        } else {
            weight_keys[key] = value;
        }
    }
    apply_weight_overrides(config.weights, weight_keys);
    if (config.provider.mode == ProviderMode::Remote && config.provider.endpoint.empty()) {
        fail("remote provider mode requires an endpoint");
    }
    config.weights.validate();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json object;
    try {
        object = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    return parse_config(object);
}

nlohmann::json to_json(const WeightsConfig& weights) {
    nlohmann::json object{
        {"alpha", weights.recency_weight},
        {"beta", weights.relevance_weight},
        {"gamma", weights.importance_weight},
        {"lambda", weights.binding_weight},
        {"theta", weights.binding_threshold},
        {"T", weights.retention_seconds},
        {"w_importance", weights.value_importance_weight},
        {"w_relevance", weights.value_relevance_weight},
        {"utility_threshold", weights.utility_threshold},
        {"dedup_threshold", weights.dedup_threshold},
        {"capacity_items", weights.capacity_items},
        {"capacity_chunks", weights.capacity_chunks},
        {"embedding_dim", weights.embedding_dim},
        {"seed", weights.seed},
    };
    if (std::isinf(weights.defer_ttl_seconds)) object["defer_ttl"] = nullptr;
    else object["defer_ttl"] = weights.defer_ttl_seconds;
    return object;
}

}  // namespace wm
