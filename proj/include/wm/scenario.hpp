#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wm/config.hpp"
#include "wm/types.hpp"

namespace wm {

struct AssistHint {
    std::string trigger;     // non-empty; matched against store item contents
    std::string message;     // non-empty
    double importance = 0.0; // [0,1]
};

// One timestamped input: a detected object (visual) or speech fragment.
struct ScenarioEvent {
    double t = 0.0;
    Modality modality = Modality::Visuospatial;   // visual -> Visuospatial, speech -> Phonological
    std::string content;
    std::optional<std::vector<double>> embedding; // precomputed, bypasses the embedder
    std::optional<double> importance;             // ground truth for the mock scorer
    std::vector<AssistHint> assist_hints;
};

struct Scenario {
    std::string name;
    std::string task_context;
    std::vector<ScenarioEvent> events;            // sorted by t, non-negative
    nlohmann::json config_overrides = nlohmann::json::object();
};

// Parses and validates a scenario document. Syntax errors carry the JSON
// parser's position; semantic errors name the offending JSON path. All
// invariants (event ordering, closed kind enum, embedding dimension against
// the scenario's effective embedding_dim, score ranges) are checked here.
Scenario parse_scenario(const nlohmann::json& document);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Parses one event object (the `run --stdin` line format).
ScenarioEvent parse_event(const nlohmann::json& object, int index, int embedding_dim);

nlohmann::json to_json(const ScenarioEvent& event);

}  // namespace wm
