#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wm/chunking.hpp"
#include "wm/config.hpp"
#include "wm/encoding.hpp"
#include "wm/providers.hpp"
#include "wm/scenario.hpp"
#include "wm/timing.hpp"
#include "wm/types.hpp"

namespace wm {

// What actually happened to a candidate within one update, as opposed to the
// threshold-rule decision. A Deliver-decided candidate past the per-update
// delivery quota stays in the queue, so its action reads "deferred".
enum class CandidateAction { Delivered, Deferred, Discarded, Expired };

inline const char* to_string(CandidateAction action) {
    switch (action) {
        case CandidateAction::Delivered: return "delivered";
        case CandidateAction::Deferred: return "deferred";
        case CandidateAction::Discarded: return "discarded";
        case CandidateAction::Expired: return "expired";
    }
    return "discarded";
}

// A freshly generated candidate's passage through the timing predictor.
struct CandidateRecord {
    CandidateId id{};
    std::string message;
    double importance = 0.0;
    std::optional<UtilityBreakdown> breakdown;   // absent under the baseline policy
    DecisionKind decision = DecisionKind::Deliver;
    CandidateAction action = CandidateAction::Delivered;
    std::optional<EncodeOutcome> encode_outcome; // delivery side effects
    std::optional<BindOutcome> bind_outcome;
};

// One deferred-queue re-evaluation.
struct DeferredEvalRecord {
    CandidateId id{};
    std::string message;
    std::optional<UtilityBreakdown> breakdown;   // absent for Expire
    DecisionKind decision = DecisionKind::Defer;
    CandidateAction action = CandidateAction::Deferred;
    std::optional<EncodeOutcome> encode_outcome;
    std::optional<BindOutcome> bind_outcome;
};

struct DeferredQueueEntry {
    CandidateId id{};
    double age = 0.0;
};

struct SnapshotItem {
    ItemId id{};
    Modality modality = Modality::Visuospatial;
    std::string content;
    double encoded_at = 0.0;
    double last_activated_at = 0.0;
    double importance = 0.0;
    PropertyScores scores;                  // at end-of-step time
    std::optional<ChunkId> chunk_id;        // absent only while awaiting a bind retry
};

struct SnapshotChunk {
    ChunkId id{};
    double created_at = 0.0;
    std::string summary;
    std::vector<ItemId> item_ids;
};

struct WmSnapshot {
    std::vector<SnapshotItem> items;
    std::vector<SnapshotChunk> chunks;
};

// Everything one WM update produced; the trace serializes these 1:1.
struct StepRecord {
    std::uint64_t step = 0;
    double t = 0.0;
    ScenarioEvent event;
    std::optional<EncodeOutcome> encode_outcome;  // absent when encoding aborted
    std::optional<BindOutcome> bind_outcome;      // absent unless a new item was inserted
    std::vector<CandidateRecord> candidates;
    std::vector<DeferredEvalRecord> deferred_evaluations;
    std::vector<DeferredQueueEntry> deferred_queue;  // post-step
    WmSnapshot wm_snapshot;
    std::vector<std::string> errors;              // provider errors surfaced this step
    Policy policy = Policy::Wm;
};

// The working-memory engine: one instance per replay, driven one event at a
// time. All mutation happens on the calling context; instances are
// independent, so concurrent replays need no coordination.
class Engine {
public:
    Engine(RunConfig config, ProviderSet providers, Policy policy, std::string task_context);

    // One full WM update: encode, bind, generate, decide, re-evaluate the
    // deferred queue. Event times must be non-decreasing across calls.
    StepRecord step(const ScenarioEvent& event);

    const WorkingMemoryState& state() const { return state_; }
    const WeightsConfig& weights() const { return config_.weights; }
    const std::vector<std::string>& delivered_history() const { return delivered_history_; }
    std::uint64_t provider_error_count() const { return provider_error_count_; }

    // Structural invariant check (capacities, partition, unit norms).
    void validate() const;

private:
    struct DeliveryEffects {
        EncodeOutcome encode;
        std::optional<BindOutcome> bind;
    };

    Embedding event_embedding(const ScenarioEvent& event);
    EncodeOutcome encode(Modality modality, const std::string& content, Embedding embedding,
                         std::optional<double> importance_override);
    // Throws ProviderFailure only while the item itself is still unbound;
    // orphan re-homing failures are recorded in `errors` and the orphans
    // parked for a retry.
    BindOutcome bind_or_create(ItemId item_id, std::vector<std::string>& errors);
    DeliveryEffects deliver(AssistanceCandidate& candidate, std::vector<std::string>& errors);
    void retry_pending_binds(std::vector<std::string>& errors);
    void process_deferred(StepRecord& record);
    void run_wm_policy(StepRecord& record, std::vector<AssistanceCandidate> candidates);
    void run_baseline_policy(StepRecord& record, std::vector<AssistanceCandidate> candidates);

    // Removes an item id from whichever chunk holds it; empty chunks are
    // deleted on the spot.
    void detach_from_chunk(ItemId item_id);
    // Summary text + embedding for a member set (provider calls up front so
    // failures leave the state untouched).
    std::pair<std::string, Embedding> summarize_members(const std::vector<ItemId>& member_ids,
                                                        const MemoryItem* extra);
    void attach_to_chunk(MemoryChunk& chunk, const MemoryItem& item);
    WmSnapshot snapshot() const;
    void record_error(std::vector<std::string>& errors, const char* where,
                      const ProviderFailure& failure);

    RunConfig config_;
    ProviderSet providers_;
    Policy policy_;
    std::string task_context_;
    WorkingMemoryState state_;
    std::vector<ItemId> pending_unbound_;
    std::vector<std::string> delivered_history_;
    std::uint64_t next_item_id_ = 1;
    std::uint64_t next_chunk_id_ = 1;
    std::uint64_t next_candidate_id_ = 1;
    std::uint64_t step_index_ = 0;
    std::uint64_t provider_error_count_ = 0;
};

}  // namespace wm
