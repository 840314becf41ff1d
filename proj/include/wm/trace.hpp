#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "wm/engine.hpp"

namespace wm {

// Trace files are JSON Lines: one serialized StepRecord per line, in step
// order. Key order inside a line is alphabetical (the JSON library's object
// ordering), which together with the deterministic engine makes replays
// byte-identical.
nlohmann::json to_json(const StepRecord& record);
nlohmann::json to_json(const EncodeOutcome& outcome);
nlohmann::json to_json(const BindOutcome& outcome);
nlohmann::json to_json(const UtilityBreakdown& breakdown);
nlohmann::json to_json(const WmSnapshot& snapshot);

void write_trace_line(std::ostream& out, const StepRecord& record);
void write_trace(std::ostream& out, const std::vector<StepRecord>& records);

}  // namespace wm
