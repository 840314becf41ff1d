#include "wm/replay.hpp"

#include "wm/errors.hpp"
#include "wm/mock_providers.hpp"
#include "wm/remote_providers.hpp"

namespace wm {

RunConfig effective_config(const Scenario& scenario, RunConfig base) {
    apply_weight_overrides(base.weights, scenario.config_overrides);
    base.weights.validate();
    for (const auto& event : scenario.events) {
        if (event.embedding &&
            static_cast<int>(event.embedding->size()) != base.weights.embedding_dim) {
            throw ConfigError("scenario carries precomputed embeddings of dimension " +
                              std::to_string(event.embedding->size()) +
                              " but the engine is configured for " +
                              std::to_string(base.weights.embedding_dim));
        }
    }
    return base;
}

namespace {

RunResult run_with(Engine& engine, const Scenario& scenario, Policy policy,
                   MockProviders* mocks) {
    RunResult result;
    result.trace.reserve(scenario.events.size());
    for (const auto& event : scenario.events) {
        if (mocks) {
            // Mock wiring owned by the replay run: the scorer's ground truth
            // for this event, and the event's scripted hints.
            mocks->importance.set_ground_truth(event.importance);
            for (const auto& hint : event.assist_hints) {
                mocks->generator.register_hint(hint.trigger, hint.message, hint.importance);
            }
        }
        result.trace.push_back(engine.step(event));
    }
    result.metrics = compute_metrics(result.trace);
    result.metrics.scenario = scenario.name;
    result.metrics.policy = to_string(policy);
    result.provider_errors = engine.provider_error_count();
    return result;
}

}  // namespace

RunResult replay(const Scenario& scenario, Policy policy, const RunConfig& config) {
    if (config.provider.mode == ProviderMode::Remote) {
        RemoteProviders providers(config.provider, config.weights.embedding_dim);
        Engine engine(config, providers.set(), policy, scenario.task_context);
        return run_with(engine, scenario, policy, nullptr);
    }
    MockProviders providers(config.weights.seed, config.weights.embedding_dim);
    Engine engine(config, providers.set(), policy, scenario.task_context);
    return run_with(engine, scenario, policy, &providers);
}

}  // namespace wm
