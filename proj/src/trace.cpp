#include "wm/trace.hpp"

namespace wm {

nlohmann::json to_json(const UtilityBreakdown& breakdown) {
    return {
        {"at", breakdown.at},
        {"importance_term", breakdown.importance_term},
        {"relevance_term", breakdown.relevance_term},
        {"value", breakdown.value},
        {"c_displacement", breakdown.c_displacement},
        {"c_interference", breakdown.c_interference},
        {"utility", breakdown.utility},
        {"decision", to_string(breakdown.decision)},
    };
}

nlohmann::json to_json(const EncodeOutcome& outcome) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& entry : outcome.scores_snapshot) {
        scores.push_back({{"item_id", raw(entry.id)},
                          {"recency", entry.scores.recency},
                          {"relevance", entry.scores.relevance},
                          {"importance", entry.scores.importance},
                          {"composite", entry.scores.composite}});
    }
    nlohmann::json object{
        {"kind", to_string(outcome.kind)},
        {"item_id", raw(outcome.item_id)},
        {"scores_snapshot", std::move(scores)},
    };
    if (outcome.displaced_id) object["displaced_id"] = raw(*outcome.displaced_id);
    return object;
}

nlohmann::json to_json(const BindOutcome& outcome) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& entry : outcome.candidate_scores) {
        scores.push_back({{"chunk_id", raw(entry.id)}, {"score", entry.score}});
    }
    nlohmann::json object{
        {"kind", to_string(outcome.kind)},
        {"chunk_id", raw(outcome.chunk_id)},
        {"candidate_scores", std::move(scores)},
    };
    if (outcome.score) object["score"] = *outcome.score;
    if (outcome.evicted_id) object["evicted_id"] = raw(*outcome.evicted_id);
    return object;
}

nlohmann::json to_json(const WmSnapshot& snapshot) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& item : snapshot.items) {
        nlohmann::json entry{
            {"id", raw(item.id)},
            {"modality", to_string(item.modality)},
            {"content", item.content},
            {"encoded_at", item.encoded_at},
            {"last_activated_at", item.last_activated_at},
            {"importance", item.importance},
            {"scores",
             {{"recency", item.scores.recency},
              {"relevance", item.scores.relevance},
              {"importance", item.scores.importance},
              {"composite", item.scores.composite}}},
        };
        if (item.chunk_id) entry["chunk_id"] = raw(*item.chunk_id);
        items.push_back(std::move(entry));
    }
    nlohmann::json chunks = nlohmann::json::array();
    for (const auto& chunk : snapshot.chunks) {
        nlohmann::json ids = nlohmann::json::array();
        for (ItemId id : chunk.item_ids) ids.push_back(raw(id));
        chunks.push_back({{"id", raw(chunk.id)},
                          {"created_at", chunk.created_at},
                          {"summary", chunk.summary},
                          {"item_ids", std::move(ids)}});
    }
    return {{"items", std::move(items)}, {"chunks", std::move(chunks)}};
}

namespace {

nlohmann::json candidate_to_json(const CandidateRecord& record) {
    nlohmann::json object{
        {"id", raw(record.id)},
        {"message", record.message},
        {"importance", record.importance},
        {"decision", to_string(record.decision)},
        {"action", to_string(record.action)},
    };
    if (record.breakdown) object["breakdown"] = to_json(*record.breakdown);
    if (record.encode_outcome) object["encode_outcome"] = to_json(*record.encode_outcome);
    if (record.bind_outcome) object["bind_outcome"] = to_json(*record.bind_outcome);
    return object;
}

nlohmann::json deferred_eval_to_json(const DeferredEvalRecord& record) {
    nlohmann::json object{
        {"id", raw(record.id)},
        {"message", record.message},
        {"decision", to_string(record.decision)},
        {"action", to_string(record.action)},
    };
    if (record.breakdown) object["breakdown"] = to_json(*record.breakdown);
    if (record.encode_outcome) object["encode_outcome"] = to_json(*record.encode_outcome);
    if (record.bind_outcome) object["bind_outcome"] = to_json(*record.bind_outcome);
    return object;
}

}  // namespace

nlohmann::json to_json(const StepRecord& record) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& candidate : record.candidates) {
        candidates.push_back(candidate_to_json(candidate));
    }
    nlohmann::json deferred_evaluations = nlohmann::json::array();
    for (const auto& evaluation : record.deferred_evaluations) {
        deferred_evaluations.push_back(deferred_eval_to_json(evaluation));
    }
    nlohmann::json queue = nlohmann::json::array();
    for (const auto& entry : record.deferred_queue) {
        queue.push_back({{"id", raw(entry.id)}, {"age", entry.age}});
    }
    nlohmann::json object{
        {"step", record.step},
        {"t", record.t},
        {"policy", to_string(record.policy)},
        {"event", to_json(record.event)},
        {"candidates", std::move(candidates)},
        {"deferred_evaluations", std::move(deferred_evaluations)},
        {"deferred_queue", std::move(queue)},
        {"wm_snapshot", to_json(record.wm_snapshot)},
        {"errors", record.errors},
    };
    object["encode_outcome"] =
        record.encode_outcome ? to_json(*record.encode_outcome) : nlohmann::json(nullptr);
    object["bind_outcome"] =
        record.bind_outcome ? to_json(*record.bind_outcome) : nlohmann::json(nullptr);
    return object;
}

void write_trace_line(std::ostream& out, const StepRecord& record) {
    out << to_json(record).dump() << "\n";
}

void write_trace(std::ostream& out, const std::vector<StepRecord>& records) {
    for (const auto& record : records) write_trace_line(out, record);
}

}  // namespace wm
