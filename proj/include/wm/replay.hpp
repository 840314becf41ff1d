#pragma once

#include <vector>

#include "wm/config.hpp"
#include "wm/metrics.hpp"
#include "wm/scenario.hpp"

namespace wm {

struct RunResult {
    std::vector<StepRecord> trace;
    MetricsReport metrics;
    std::uint64_t provider_errors = 0;
};

// Merges a scenario's config_overrides onto a base config and validates.
RunConfig effective_config(const Scenario& scenario, RunConfig base);

// Deterministic replay: one engine update per event, in file order. The
// simulated clock comes solely from event timestamps. Provider errors are
// recorded per step and the replay continues. `config` must already include
// the scenario's overrides (see effective_config).
RunResult replay(const Scenario& scenario, Policy policy, const RunConfig& config);

}  // namespace wm
