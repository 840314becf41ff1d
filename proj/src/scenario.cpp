#include "wm/scenario.hpp"

#include <fstream>
#include <sstream>

#include "wm/errors.hpp"

namespace wm {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError("scenario parse error at " + path + ": " + message);
}

std::string event_path(int index, const char* field) {
    std::ostringstream out;
    out << "events[" << index << "]";
    if (field) out << "." << field;
    return out.str();
}

double range_checked(const nlohmann::json& value, const std::string& path, double lo, double hi) {
    if (!value.is_number()) fail(path, "expected a number");
    const double v = value.get<double>();
    if (v < lo || v > hi) {
        fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + "," +
                       std::to_string(hi) + "]");
    }
    return v;
}

AssistHint parse_hint(const nlohmann::json& object, const std::string& path) {
    if (!object.is_object()) fail(path, "hint must be an object");
    AssistHint hint;
    for (const auto& [key, value] : object.items()) {
        if (key == "trigger") {
            if (!value.is_string() || value.get<std::string>().empty())
                fail(path + ".trigger", "must be a non-empty string");
            hint.trigger = value.get<std::string>();
        } else if (key == "message") {
            if (!value.is_string() || value.get<std::string>().empty())
                fail(path + ".message", "must be a non-empty string");
            hint.message = value.get<std::string>();
        } else if (key == "importance") {
            hint.importance = range_checked(value, path + ".importance", 0.0, 1.0);
        } else {
            fail(path, "unknown key \"" + key + "\"");
        }
    }
    if (hint.trigger.empty()) fail(path, "missing trigger");
    if (hint.message.empty()) fail(path, "missing message");
    return hint;
}

}  // namespace

ScenarioEvent parse_event(const nlohmann::json& object, int index, int embedding_dim) {
    if (!object.is_object()) fail(event_path(index, nullptr), "event must be an object");
    ScenarioEvent event;
    bool saw_t = false;
    bool saw_kind = false;
    for (const auto& [key, value] : object.items()) {
        if (key == "t") {
            if (!value.is_number()) fail(event_path(index, "t"), "expected a number");
            event.t = value.get<double>();
            if (event.t < 0.0) fail(event_path(index, "t"), "timestamps must be non-negative");
            saw_t = true;
        } else if (key == "kind") {
            const std::string kind = value.is_string() ? value.get<std::string>() : "";
            if (kind == "visual") event.modality = Modality::Visuospatial;
            else if (kind == "speech") event.modality = Modality::Phonological;
            else fail(event_path(index, "kind"), "unknown event kind \"" + kind + "\"");
            saw_kind = true;
        } else if (key == "content") {
            if (!value.is_string() || value.get<std::string>().empty())
                fail(event_path(index, "content"), "must be a non-empty string");
            event.content = value.get<std::string>();
        } else if (key == "embedding") {
            if (!value.is_array()) fail(event_path(index, "embedding"), "expected an array");
            std::vector<double> raw_values;
            raw_values.reserve(value.size());
            for (const auto& component : value) {
                if (!component.is_number())
                    fail(event_path(index, "embedding"), "components must be numbers");
                raw_values.push_back(component.get<double>());
            }
            if (static_cast<int>(raw_values.size()) != embedding_dim) {
                fail(event_path(index, "embedding"),
                     "dimension " + std::to_string(raw_values.size()) + " does not match engine dimension " +
                         std::to_string(embedding_dim));
            }
            event.embedding = std::move(raw_values);
        } else if (key == "importance") {
            event.importance = range_checked(value, event_path(index, "importance"), 0.0, 1.0);
        } else if (key == "assist_hints") {
            if (!value.is_array()) fail(event_path(index, "assist_hints"), "expected an array");
            for (std::size_t h = 0; h < value.size(); ++h) {
                event.assist_hints.push_back(parse_hint(
                    value[h], event_path(index, "assist_hints") + "[" + std::to_string(h) + "]"));
            }
        } else {
            fail(event_path(index, nullptr), "unknown key \"" + key + "\"");
        }
    }
    if (!saw_t) fail(event_path(index, "t"), "missing");
    if (!saw_kind) fail(event_path(index, "kind"), "missing");
    if (event.content.empty()) fail(event_path(index, "content"), "missing");
    return event;
}

Scenario parse_scenario(const nlohmann::json& document) {
    if (!document.is_object()) fail("$", "scenario must be a JSON object");
    Scenario scenario;
    const nlohmann::json* events = nullptr;
    for (const auto& [key, value] : document.items()) {
        if (key == "name") {
            if (!value.is_string() || value.get<std::string>().empty())
                fail("name", "must be a non-empty string");
            scenario.name = value.get<std::string>();
        } else if (key == "task_context") {
            if (!value.is_string()) fail("task_context", "must be a string");
            scenario.task_context = value.get<std::string>();
        } else if (key == "events") {
            if (!value.is_array()) fail("events", "expected an array");
            events = &value;
        } else if (key == "config_overrides") {
            if (!value.is_object()) fail("config_overrides", "expected an object");
            scenario.config_overrides = value;
            // Vet the overrides now so a bad scenario fails at parse time.
            WeightsConfig probe;
            try {
                apply_weight_overrides(probe, value);
            } catch (const ConfigError& e) {
                fail("config_overrides", e.what());
            }
        } else {
            fail("$", "unknown key \"" + key + "\"");
        }
    }
    if (scenario.name.empty()) fail("name", "missing");

    // Events validate their embeddings against the scenario's effective
    // dimension (its own override or the default).
    WeightsConfig effective;
    apply_weight_overrides(effective, scenario.config_overrides);

    if (events) {
        double previous_t = 0.0;
        for (std::size_t i = 0; i < events->size(); ++i) {
            ScenarioEvent event =
                parse_event((*events)[i], static_cast<int>(i), effective.embedding_dim);
            if (i > 0 && event.t < previous_t) {
                fail(event_path(static_cast<int>(i), "t"),
                     "non-monotone timestamps (" + std::to_string(event.t) + " after " +
                         std::to_string(previous_t) + ")");
            }
            previous_t = event.t;
            scenario.events.push_back(std::move(event));
        }
    }
    return scenario;
}

Scenario parse_scenario_text(const std::string& text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(document);
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

nlohmann::json to_json(const ScenarioEvent& event) {
    nlohmann::json object{
        {"t", event.t},
        {"kind", event.modality == Modality::Visuospatial ? "visual" : "speech"},
        {"content", event.content},
    };
    if (event.embedding) object["embedding"] = *event.embedding;
    if (event.importance) object["importance"] = *event.importance;
    if (!event.assist_hints.empty()) {
        nlohmann::json hints = nlohmann::json::array();
        for (const auto& hint : event.assist_hints) {
            hints.push_back({{"trigger", hint.trigger},
                             {"message", hint.message},
                             {"importance", hint.importance}});
        }
        object["assist_hints"] = hints;
    }
    return object;
}

}  // namespace wm
