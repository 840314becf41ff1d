#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wm/engine.hpp"

namespace wm {

// Aggregated run counters. Encode buckets partition the event stream
// (encoded = newly added without displacement); assistance buckets
// partition candidate fates, every candidate ending in exactly one of
// delivered/discarded/expired or still deferred at trace end.
struct MetricsReport {
    std::string scenario;
    std::string policy;
    std::uint64_t events = 0;
    std::uint64_t encoded = 0;
    std::uint64_t refreshed = 0;
    std::uint64_t displaced = 0;
    std::uint64_t encode_errors = 0;
    std::uint64_t candidates_generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t deferred_peak = 0;
    std::uint64_t deferred_remaining = 0;
    std::uint64_t discarded = 0;
    std::uint64_t expired = 0;
    std::uint64_t provider_errors = 0;
};

MetricsReport compute_metrics(const std::vector<StepRecord>& trace);

// Percentage with exact rational rounding to one decimal (half away from
// zero). Returns -1 for an empty denominator; callers emit null for it.
double percent_1dp(std::uint64_t numerator, std::uint64_t denominator);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace wm
