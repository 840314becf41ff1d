// wmsim: replay scenario event streams through the working-memory engine,
// compare timing policies, and inspect trace files.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wm/errors.hpp"
#include "wm/replay.hpp"
#include "wm/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitScenario = 2;   // missing or invalid scenario file
constexpr int kExitConfig = 3;     // invalid config
constexpr int kExitProvider = 4;   // remote provider failure (trace flushed)
constexpr int kExitTrace = 5;      // malformed trace line (inspect)

int fail(int code, const std::string& message) {
    nlohmann::json error{{"error", {{"code", code}, {"message", message}}}};
    std::cout << error.dump() << "\n";
    std::cerr << "wmsim: " << message << "\n";
    return code;
}

wm::Policy parse_policy(const std::string& name) {
    return name == "baseline" ? wm::Policy::Baseline : wm::Policy::Wm;
}

// defaults < --config file < scenario overrides < env < explicit flags
struct ConfigInputs {
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
};

wm::RunConfig assemble_config(const ConfigInputs& inputs, const wm::Scenario& scenario) {
    wm::RunConfig config;
    if (!inputs.config_path.empty()) {
        config = wm::load_config_file(inputs.config_path);
    }
    config = wm::effective_config(scenario, std::move(config));
    if (const char* seed_env = std::getenv("WMSIM_SEED")) {
        try {
            config.weights.seed = std::stoull(seed_env);
        } catch (const std::exception&) {
            throw wm::ConfigError("WMSIM_SEED must be an unsigned integer");
        }
    }
    if (const char* endpoint_env = std::getenv("WMSIM_ENDPOINT")) {
        config.provider.endpoint = endpoint_env;
    }
    if (inputs.seed_flag) config.weights.seed = *inputs.seed_flag;
    config.weights.validate();
    if (config.provider.mode == wm::ProviderMode::Remote && config.provider.endpoint.empty()) {
        throw wm::ConfigError("remote provider mode requires an endpoint");
    }
    return config;
}

wm::Scenario scenario_from_stdin(const std::string& name) {
    // One scenario-event JSON object per input line; identical semantics to
    // a scenario file holding the same events.
    wm::Scenario scenario;
    scenario.name = name;
    std::string line;
    int index = 0;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw wm::ParseError("stdin line " + std::to_string(index + 1) +
                                 " is not valid JSON: " + e.what());
        }
        wm::ScenarioEvent event = wm::parse_event(object, index, wm::WeightsConfig{}.embedding_dim);
        if (!scenario.events.empty() && event.t < scenario.events.back().t) {
            throw wm::ParseError("stdin line " + std::to_string(index + 1) +
                                 ": non-monotone timestamps");
        }
        scenario.events.push_back(std::move(event));
        ++index;
    }
    return scenario;
}

int write_trace_file(const std::string& path, const std::vector<wm::StepRecord>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(kExitFailure, "cannot open trace output file: " + path);
    wm::write_trace(out, trace);
    out.flush();
    if (!out) return fail(kExitFailure, "failed writing trace file: " + path);
    return kExitOk;
}

int cmd_run(const std::string& scenario_path, bool use_stdin, const std::string& policy_name,
            const ConfigInputs& config_inputs, const std::string& trace_path) {
    wm::Scenario scenario;
    try {
        scenario = use_stdin ? scenario_from_stdin(scenario_path.empty() ? "stdin" : scenario_path)
                             : wm::load_scenario_file(scenario_path);
    } catch (const wm::ParseError& e) {
        return fail(kExitScenario, e.what());
    }

    wm::RunConfig config;
    try {
        config = assemble_config(config_inputs, scenario);
    } catch (const wm::ConfigError& e) {
        return fail(kExitConfig, e.what());
    }

    wm::RunResult result;
    try {
        result = wm::replay(scenario, parse_policy(policy_name), config);
    } catch (const std::exception& e) {
        return fail(kExitFailure, std::string("replay failed: ") + e.what());
    }

    if (!trace_path.empty()) {
        const int rc = write_trace_file(trace_path, result.trace);
        if (rc != kExitOk) return rc;
    }
    std::cout << wm::to_json(result.metrics).dump() << "\n";

    if (config.provider.mode == wm::ProviderMode::Remote && result.provider_errors > 0) {
        std::cerr << "wmsim: " << result.provider_errors
                  << " remote provider error(s); trace flushed with per-step error records\n";
        return kExitProvider;
    }
    return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const ConfigInputs& config_inputs, bool json) {
    wm::Scenario scenario;
    try {
        scenario = wm::load_scenario_file(scenario_path);
    } catch (const wm::ParseError& e) {
        return fail(kExitScenario, e.what());
    }

    wm::RunConfig config;
    try {
        config = assemble_config(config_inputs, scenario);
    } catch (const wm::ConfigError& e) {
        return fail(kExitConfig, e.what());
    }

    wm::RunResult wm_result;
    wm::RunResult baseline_result;
    try {
        // Independent engine instances over identical inputs and seed.
        wm_result = wm::replay(scenario, wm::Policy::Wm, config);
        baseline_result = wm::replay(scenario, wm::Policy::Baseline, config);
    } catch (const std::exception& e) {
        return fail(kExitFailure, std::string("replay failed: ") + e.what());
    }

    nlohmann::json ratio = nullptr;
    if (baseline_result.metrics.delivered > 0) {
        ratio = static_cast<double>(wm_result.metrics.delivered) /
                static_cast<double>(baseline_result.metrics.delivered);
    }

    if (json) {
        nlohmann::json report{{"scenario", scenario.name},
                              {"wm", wm::to_json(wm_result.metrics)},
                              {"baseline", wm::to_json(baseline_result.metrics)},
                              {"selectivity_ratio", ratio}};
        std::cout << report.dump() << "\n";
    } else {
        const auto& a = wm_result.metrics;
        const auto& b = baseline_result.metrics;
        std::cout << "scenario: " << scenario.name << "\n";
        std::cout << "                       wm   baseline\n";
        auto row = [](const char* label, std::uint64_t wm_value, std::uint64_t base_value) {
            std::printf("%-20s %5llu %10llu\n", label,
                        static_cast<unsigned long long>(wm_value),
                        static_cast<unsigned long long>(base_value));
        };
        row("events", a.events, b.events);
        row("encoded", a.encoded, b.encoded);
        row("refreshed", a.refreshed, b.refreshed);
        row("displaced", a.displaced, b.displaced);
        row("candidates", a.candidates_generated, b.candidates_generated);
        row("delivered", a.delivered, b.delivered);
        row("deferred_peak", a.deferred_peak, b.deferred_peak);
        row("discarded", a.discarded, b.discarded);
        row("expired", a.expired, b.expired);
        if (ratio.is_null()) {
            std::cout << "selectivity ratio: n/a (baseline delivered nothing)\n";
        } else {
            std::printf("selectivity ratio: %.3f\n", ratio.get<double>());
        }
    }

    if (config.provider.mode == wm::ProviderMode::Remote &&
        wm_result.provider_errors + baseline_result.provider_errors > 0) {
        return kExitProvider;
    }
    return kExitOk;
}

void print_step_detail(const nlohmann::json& record) {
    std::cout << "step " << record.value("step", 0ULL) << "  t=" << record.value("t", 0.0)
              << "  policy=" << record.value("policy", std::string("?")) << "\n";
    const auto& event = record["event"];
    std::cout << "  event: [" << event.value("kind", std::string("?")) << "] "
              << event.value("content", std::string()) << "\n";
    if (record.contains("encode_outcome") && !record["encode_outcome"].is_null()) {
        const auto& encode = record["encode_outcome"];
        std::cout << "  encode: " << encode.value("kind", std::string("?")) << " item "
                  << encode.value("item_id", 0ULL);
        if (encode.contains("displaced_id"))
            std::cout << " (displaced " << encode["displaced_id"].get<std::uint64_t>() << ")";
        std::cout << "\n";
    } else {
        std::cout << "  encode: aborted\n";
    }
    if (record.contains("bind_outcome") && !record["bind_outcome"].is_null()) {
        const auto& bind = record["bind_outcome"];
        std::cout << "  bind: " << bind.value("kind", std::string("?")) << " chunk "
                  << bind.value("chunk_id", 0ULL);
        if (bind.contains("evicted_id"))
            std::cout << " (evicted " << bind["evicted_id"].get<std::uint64_t>() << ")";
        std::cout << "\n";
    }
    std::cout << "  items:\n";
    for (const auto& item : record["wm_snapshot"]["items"]) {
        const auto& scores = item["scores"];
        std::printf("    #%llu [%s] \"%s\" rec=%.3f rel=%.3f imp=%.3f comp=%.3f",
                    static_cast<unsigned long long>(item.value("id", 0ULL)),
                    item.value("modality", std::string("?")).c_str(),
                    item.value("content", std::string()).c_str(), scores.value("recency", 0.0),
                    scores.value("relevance", 0.0), scores.value("importance", 0.0),
                    scores.value("composite", 0.0));
        if (item.contains("chunk_id"))
            std::printf(" chunk=%llu",
                        static_cast<unsigned long long>(item["chunk_id"].get<std::uint64_t>()));
        std::printf("\n");
    }
    std::cout << "  chunks:\n";
    for (const auto& chunk : record["wm_snapshot"]["chunks"]) {
        std::cout << "    #" << chunk.value("id", 0ULL) << " \""
                  << chunk.value("summary", std::string()) << "\" members=[";
        bool first = true;
        for (const auto& id : chunk["item_ids"]) {
            if (!first) std::cout << ",";
            std::cout << id.get<std::uint64_t>();
            first = false;
        }
        std::cout << "]\n";
    }
    auto print_eval = [](const nlohmann::json& entry) {
        std::cout << "    #" << entry.value("id", 0ULL) << " \""
                  << entry.value("message", std::string()) << "\" decision="
                  << entry.value("decision", std::string("?"))
                  << " action=" << entry.value("action", std::string("?"));
        if (entry.contains("breakdown")) {
            const auto& b = entry["breakdown"];
            std::printf(" (value=%.3f cd=%.3f ci=%.3f utility=%.3f)", b.value("value", 0.0),
                        b.value("c_displacement", 0.0), b.value("c_interference", 0.0),
                        b.value("utility", 0.0));
        }
        std::cout << "\n";
    };
    if (!record["candidates"].empty()) {
        std::cout << "  candidates:\n";
        for (const auto& entry : record["candidates"]) print_eval(entry);
    }
    if (!record["deferred_evaluations"].empty()) {
        std::cout << "  deferred re-evaluations:\n";
        for (const auto& entry : record["deferred_evaluations"]) print_eval(entry);
    }
    if (!record["deferred_queue"].empty()) {
        std::cout << "  deferred queue:";
        for (const auto& entry : record["deferred_queue"]) {
            std::cout << " #" << entry.value("id", 0ULL) << "(age " << entry.value("age", 0.0)
                      << "s)";
        }
        std::cout << "\n";
    }
}

int cmd_inspect(const std::string& trace_path, std::optional<std::uint64_t> step, bool json) {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) return fail(kExitScenario, "cannot open trace file: " + trace_path);

    std::vector<nlohmann::json> records;
    std::string line;
    std::uint64_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            return fail(kExitTrace,
                        "malformed trace line " + std::to_string(line_number) + ": " + e.what());
        }
    }

    if (step) {
        for (const auto& record : records) {
            if (record.value("step", std::uint64_t(-1)) == *step) {
                if (json) std::cout << record.dump() << "\n";
                else print_step_detail(record);
                return kExitOk;
            }
        }
        return fail(kExitFailure, "step " + std::to_string(*step) + " not found in trace");
    }

    // Summary over all steps.
    std::uint64_t delivered = 0, discarded = 0, expired = 0, candidates = 0;
    for (const auto& record : records) {
        candidates += record.value("candidates", nlohmann::json::array()).size();
        for (const char* key : {"candidates", "deferred_evaluations"}) {
            for (const auto& entry : record.value(key, nlohmann::json::array())) {
                const std::string action = entry.value("action", std::string());
                if (action == "delivered") ++delivered;
                else if (action == "discarded") ++discarded;
                else if (action == "expired") ++expired;
            }
        }
    }
    if (json) {
        nlohmann::json summary{{"steps", records.size()},
                               {"candidates_generated", candidates},
                               {"delivered", delivered},
                               {"discarded", discarded},
                               {"expired", expired}};
        std::cout << summary.dump() << "\n";
    } else {
        std::cout << records.size() << " steps, " << candidates << " candidates ("
                  << delivered << " delivered, " << discarded << " discarded, " << expired
                  << " expired)\n";
        for (const auto& record : records) {
            std::cout << "  step " << record.value("step", 0ULL) << " t=" << record.value("t", 0.0)
                      << " [" << record["event"].value("kind", std::string("?")) << "] "
                      << record["event"].value("content", std::string());
            if (record.contains("encode_outcome") && !record["encode_outcome"].is_null()) {
                std::cout << " -> " << record["encode_outcome"].value("kind", std::string("?"));
            } else {
                std::cout << " -> encode-error";
            }
            std::cout << ", queue=" << record.value("deferred_queue", nlohmann::json::array()).size()
                      << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"working-memory assistance-timing simulator"};
    app.require_subcommand(1);

    // run
    std::string run_scenario;
    std::string run_policy = "wm";
    std::string run_trace;
    ConfigInputs run_config;
    bool run_stdin = false;
    bool run_json = false;
    auto* run = app.add_subcommand("run", "replay a scenario under one policy");
    run->add_option("scenario", run_scenario, "scenario JSON file");
    run->add_flag("--stdin", run_stdin, "read scenario events line-by-line from stdin");
    run->add_option("--policy", run_policy, "decision policy")
        ->check(CLI::IsMember({"wm", "baseline"}));
    run->add_option("--config", run_config.config_path, "config JSON file");
    run->add_option("--trace", run_trace, "write the JSONL trace to this path");
    run->add_option("--seed", run_config.seed_flag, "override the provider seed");
    run->add_flag("--json", run_json, "metrics output is already a single JSON object");

    // compare
    std::string compare_scenario;
    ConfigInputs compare_config;
    bool compare_json = false;
    auto* compare = app.add_subcommand("compare", "run both policies on identical inputs");
    compare->add_option("scenario", compare_scenario, "scenario JSON file")->required();
    compare->add_option("--config", compare_config.config_path, "config JSON file");
    compare->add_option("--seed", compare_config.seed_flag, "override the provider seed");
    compare->add_flag("--json", compare_json, "emit one JSON object instead of a table");

    // inspect
    std::string inspect_trace;
    std::optional<std::uint64_t> inspect_step;
    bool inspect_json = false;
    auto* inspect = app.add_subcommand("inspect", "summarize or drill into a trace file");
    inspect->add_option("trace", inspect_trace, "JSONL trace file")->required();
    inspect->add_option("--step", inspect_step, "print the full snapshot for one step");
    inspect->add_flag("--json", inspect_json, "emit JSON instead of human-readable text");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (run_scenario.empty() && !run_stdin) {
                return fail(kExitScenario, "a scenario file (or --stdin) is required");
            }
            return cmd_run(run_scenario, run_stdin, run_policy, run_config, run_trace);
        }
        if (compare->parsed()) {
            return cmd_compare(compare_scenario, compare_config, compare_json);
        }
        return cmd_inspect(inspect_trace, inspect_step, inspect_json);
    } catch (const std::exception& e) {
        return fail(kExitFailure, e.what());
    }
}
