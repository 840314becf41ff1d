#include "wm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace wm {

Engine::Engine(RunConfig config, ProviderSet providers, Policy policy, std::string task_context)
    : config_(std::move(config)),
      providers_(providers),
      policy_(policy),
      task_context_(std::move(task_context)) {
    config_.weights.validate();
}

void Engine::validate() const { validate_state(state_, config_.weights, pending_unbound_); }

void Engine::record_error(std::vector<std::string>& errors, const char* where,
                          const ProviderFailure& failure) {
    ++provider_error_count_;
    errors.push_back(std::string(where) + ": " + to_string(failure.error.kind) + ": " +
                     failure.error.detail);
}

Embedding Engine::event_embedding(const ScenarioEvent& event) {
    if (event.embedding) {
        return Embedding(*event.embedding);  // table-lookup mode, bypasses the embedder
    }
    Embedding embedding = providers_.embedder->embed(event.content, event.modality);
    if (static_cast<int>(embedding.dimension()) != config_.weights.embedding_dim) {
        throw ProviderFailure({ProviderErrorKind::MalformedResponse,
                               "embedder returned dimension " + std::to_string(embedding.dimension())});
    }
    return embedding;
}

void Engine::detach_from_chunk(ItemId item_id) {
    for (auto chunk_it = state_.episodic.begin(); chunk_it != state_.episodic.end(); ++chunk_it) {
        auto& ids = chunk_it->item_ids;
        auto member = std::find(ids.begin(), ids.end(), item_id);
        if (member == ids.end()) continue;
        ids.erase(member);
        if (ids.empty()) state_.episodic.erase(chunk_it);
        return;
    }
}

EncodeOutcome Engine::encode(Modality modality, const std::string& content, Embedding embedding,
                             std::optional<double> importance_override) {
    EncodeOutcome outcome;
    outcome.scores_snapshot.reserve(state_.perception.size());
    for (const auto& item : state_.perception) {
        outcome.scores_snapshot.push_back({item.id, score_item(item, state_, config_.weights)});
    }

    if (auto duplicate = detect_duplicate(embedding, modality, state_.perception,
                                          config_.weights.dedup_threshold)) {
        // Rehearsal: the duplicate only re-activates; content, embedding and
        // importance stay as first encoded.
        state_.find_item(*duplicate)->last_activated_at = state_.now;
        outcome.kind = EncodeOutcome::Kind::Refreshed;
        outcome.item_id = *duplicate;
        return outcome;
    }

    double importance;
    if (importance_override) {
        importance = *importance_override;
    } else {
        // Exactly one scorer call per new item; a failure propagates before
        // any mutation, leaving the state unchanged.
        importance = providers_.importance->score(content, task_context_);
        if (!(importance >= 0.0 && importance <= 1.0)) {
            throw ProviderFailure({ProviderErrorKind::MalformedResponse,
                                   "importance " + std::to_string(importance) + " outside [0,1]"});
        }
    }

    if (static_cast<int>(state_.perception.size()) >= config_.weights.capacity_items) {
        const ItemId victim = select_displacement_victim(state_, config_.weights);
        detach_from_chunk(victim);
        std::erase_if(state_.perception, [victim](const MemoryItem& item) { return item.id == victim; });
        std::erase(pending_unbound_, victim);
        outcome.kind = EncodeOutcome::Kind::Displaced;
        outcome.displaced_id = victim;
    } else {
        outcome.kind = EncodeOutcome::Kind::Added;
    }

    MemoryItem item{ItemId{next_item_id_++}, modality,  content,   std::move(embedding),
                    state_.now,              state_.now, importance};
    outcome.item_id = item.id;
    state_.perception.push_back(std::move(item));
    return outcome;
}

std::pair<std::string, Embedding> Engine::summarize_members(const std::vector<ItemId>& member_ids,
                                                            const MemoryItem* extra) {
    std::vector<const MemoryItem*> members;
    members.reserve(member_ids.size() + 1);
    for (ItemId id : member_ids) members.push_back(state_.find_item(id));
    if (extra) members.push_back(extra);
    std::string summary = providers_.summarizer->summarize(members, task_context_);
    if (summary.empty()) {
        throw ProviderFailure({ProviderErrorKind::MalformedResponse, "empty episode summary"});
    }
    Embedding embedding = providers_.embedder->embed(summary, Modality::Phonological);
    if (static_cast<int>(embedding.dimension()) != config_.weights.embedding_dim) {
        throw ProviderFailure({ProviderErrorKind::MalformedResponse,
                               "embedder returned dimension " + std::to_string(embedding.dimension())});
    }
    return {std::move(summary), std::move(embedding)};
}

void Engine::attach_to_chunk(MemoryChunk& chunk, const MemoryItem& item) {
    // Summaries regenerate whenever a chunk gains a member; provider calls
    // happen before the mutation so a failure leaves the chunk intact.
    auto [summary, embedding] = summarize_members(chunk.item_ids, &item);
    chunk.item_ids.push_back(item.id);
    chunk.summary = std::move(summary);
    chunk.summary_embedding = std::move(embedding);
}

BindOutcome Engine::bind_or_create(ItemId item_id, std::vector<std::string>& errors) {
    const MemoryItem* item = state_.find_item(item_id);
    if (!item) throw ContractViolation("binding an item that is not in the perception store");

    BindOutcome outcome;
    const MemoryChunk* best = nullptr;
    double best_score = 0.0;
    for (const auto& chunk : state_.episodic) {
        const double score = binding_score(*item, chunk, state_, config_.weights.binding_weight);
        outcome.candidate_scores.push_back({chunk.id, score});
        const bool wins = !best || score > best_score ||
                          (score == best_score &&
                           (chunk.created_at > best->created_at ||
                            (chunk.created_at == best->created_at && chunk.id < best->id)));
        if (wins) {
            best = &chunk;
            best_score = score;
        }
    }

    if (best && best_score > config_.weights.binding_threshold) {
        attach_to_chunk(*state_.find_chunk(best->id), *item);
        outcome.kind = BindOutcome::Kind::Bound;
        outcome.chunk_id = best->id;
        outcome.score = best_score;
        return outcome;
    }

    std::vector<ItemId> orphans;
    if (static_cast<int>(state_.episodic.size()) >= config_.weights.capacity_chunks) {
        const ChunkId evicted = select_eviction_victim(state_, config_.weights);
        MemoryChunk* victim = state_.find_chunk(evicted);
        orphans = victim->item_ids;
        std::sort(orphans.begin(), orphans.end());
        // New-chunk provider calls precede the eviction so a failure aborts
        // cleanly with the buffer untouched.
        auto [summary, embedding] = summarize_members({item_id}, nullptr);
        std::erase_if(state_.episodic,
                      [evicted](const MemoryChunk& chunk) { return chunk.id == evicted; });
        state_.episodic.push_back(MemoryChunk{ChunkId{next_chunk_id_++}, state_.now,
                                              std::move(summary), std::move(embedding),
                                              {item_id}});
        outcome.kind = BindOutcome::Kind::CreatedWithDisplacement;
        outcome.chunk_id = state_.episodic.back().id;
        outcome.evicted_id = evicted;
    } else {
        auto [summary, embedding] = summarize_members({item_id}, nullptr);
        state_.episodic.push_back(MemoryChunk{ChunkId{next_chunk_id_++}, state_.now,
                                              std::move(summary), std::move(embedding),
                                              {item_id}});
        outcome.kind = BindOutcome::Kind::Created;
        outcome.chunk_id = state_.episodic.back().id;
        return outcome;
    }

    // Re-home the evicted chunk's items, ascending id. Scores above theta
    // bind normally; otherwise one fresh chunk may be created if the buffer
    // has room, and past that every orphan joins its best-scoring chunk
    // regardless of theta (forced home) to keep the partition intact. A
    // provider failure parks the orphan for a retry on the next update; the
    // triggering item is already bound by this point, so these failures are
    // recorded rather than thrown.
    bool extra_chunk_created = false;
    for (std::size_t index = 0; index < orphans.size(); ++index) {
        const ItemId orphan_id = orphans[index];
        const MemoryItem* orphan = state_.find_item(orphan_id);
        double top_score = 0.0;
        MemoryChunk* top = nullptr;
        for (auto& chunk : state_.episodic) {
            const double score =
                binding_score(*orphan, chunk, state_, config_.weights.binding_weight);
            const bool wins = !top || score > top_score ||
                              (score == top_score &&
                               (chunk.created_at > top->created_at ||
                                (chunk.created_at == top->created_at && chunk.id < top->id)));
            if (wins) {
                top = &chunk;
                top_score = score;
            }
        }
        try {
            if (top && top_score > config_.weights.binding_threshold) {
                attach_to_chunk(*top, *orphan);
            } else if (static_cast<int>(state_.episodic.size()) < config_.weights.capacity_chunks &&
                       !extra_chunk_created) {
                auto [summary, embedding] = summarize_members({orphan_id}, nullptr);
                state_.episodic.push_back(MemoryChunk{ChunkId{next_chunk_id_++}, state_.now,
                                                      std::move(summary), std::move(embedding),
                                                      {orphan_id}});
                extra_chunk_created = true;
            } else {
                attach_to_chunk(*top, *orphan);
            }
        } catch (const ProviderFailure& failure) {
            record_error(errors, "rebind", failure);
            for (std::size_t rest = index; rest < orphans.size(); ++rest) {
                pending_unbound_.push_back(orphans[rest]);
            }
            break;
        }
    }
    return outcome;
}

void Engine::retry_pending_binds(std::vector<std::string>& errors) {
    if (pending_unbound_.empty()) return;
    std::vector<ItemId> pending = std::exchange(pending_unbound_, {});
    std::sort(pending.begin(), pending.end());
    for (ItemId id : pending) {
        if (!state_.find_item(id)) continue;  // displaced while waiting
        try {
            bind_or_create(id, errors);
        } catch (const ProviderFailure& failure) {
            record_error(errors, "bind-retry", failure);
            pending_unbound_.push_back(id);
        }
    }
}

Engine::DeliveryEffects Engine::deliver(AssistanceCandidate& candidate,
                                        std::vector<std::string>& errors) {
    // Delivered assistance becomes WM content: encoded as a phonological
    // item carrying the candidate's frozen importance (no scorer call).
    DeliveryEffects effects{
        encode(Modality::Phonological, candidate.message, candidate.embedding,
               candidate.importance),
        std::nullopt};
    if (effects.encode.kind != EncodeOutcome::Kind::Refreshed) {
        try {
            effects.bind = bind_or_create(effects.encode.item_id, errors);
        } catch (const ProviderFailure& failure) {
            record_error(errors, "bind", failure);
            pending_unbound_.push_back(effects.encode.item_id);
        }
    }
    delivered_history_.push_back(candidate.message);
    return effects;
}

void Engine::run_wm_policy(StepRecord& record, std::vector<AssistanceCandidate> candidates) {
    bool fresh_delivery_used = false;
    std::vector<AssistanceCandidate> to_defer;

    for (auto& candidate : candidates) {
        const Decision decision = evaluate(candidate, state_, config_.weights);
        CandidateRecord entry;
        entry.id = candidate.id;
        entry.message = candidate.message;
        entry.importance = candidate.importance;
        entry.breakdown = decision.breakdown;
        entry.decision = decision.kind;
        switch (decision.kind) {
            case DecisionKind::Deliver:
                if (!fresh_delivery_used) {
                    fresh_delivery_used = true;
                    auto effects = deliver(candidate, record.errors);
                    entry.action = CandidateAction::Delivered;
                    entry.encode_outcome = std::move(effects.encode);
                    entry.bind_outcome = std::move(effects.bind);
                } else {
                    // Per-update delivery quota used; the candidate waits its
                    // turn in the queue.
                    entry.action = CandidateAction::Deferred;
                    to_defer.push_back(std::move(candidate));
                }
                break;
            case DecisionKind::Defer:
                entry.action = CandidateAction::Deferred;
                to_defer.push_back(std::move(candidate));
                break;
            default:
                entry.action = CandidateAction::Discarded;
                break;
        }
        record.candidates.push_back(std::move(entry));
    }

    process_deferred(record);

    // Candidates deferred this update enter the queue after it was
    // processed: re-evaluation starts on the next WM update.
    for (auto& candidate : to_defer) state_.deferred.push_back(std::move(candidate));
}

void Engine::run_baseline_policy(StepRecord& record, std::vector<AssistanceCandidate> candidates) {
    for (auto& candidate : candidates) {
        const Decision decision = baseline_decide();
        CandidateRecord entry;
        entry.id = candidate.id;
        entry.message = candidate.message;
        entry.importance = candidate.importance;
        entry.decision = decision.kind;
        entry.action = CandidateAction::Delivered;
        auto effects = deliver(candidate, record.errors);
        entry.encode_outcome = std::move(effects.encode);
        entry.bind_outcome = std::move(effects.bind);
        record.candidates.push_back(std::move(entry));
    }
}

void Engine::process_deferred(StepRecord& record) {
    bool queue_delivery_used = false;
    for (std::size_t i = 0; i < state_.deferred.size();) {
        AssistanceCandidate& candidate = state_.deferred[i];
        DeferredEvalRecord entry;
        entry.id = candidate.id;
        entry.message = candidate.message;

        const double age = state_.now - candidate.created_at;
        if (age > config_.weights.defer_ttl_seconds) {
            entry.decision = DecisionKind::Expire;
            entry.action = CandidateAction::Expired;
            record.deferred_evaluations.push_back(std::move(entry));
            state_.deferred.erase(state_.deferred.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
        }

        const Decision decision = evaluate(candidate, state_, config_.weights);
        entry.breakdown = decision.breakdown;
        entry.decision = decision.kind;
        bool erase = false;
        switch (decision.kind) {
            case DecisionKind::Deliver:
                if (!queue_delivery_used) {
                    queue_delivery_used = true;
                    auto effects = deliver(candidate, record.errors);
                    entry.action = CandidateAction::Delivered;
                    entry.encode_outcome = std::move(effects.encode);
                    entry.bind_outcome = std::move(effects.bind);
                    erase = true;
                } else {
                    entry.action = CandidateAction::Deferred;
                }
                break;
            case DecisionKind::Defer:
                entry.action = CandidateAction::Deferred;
                break;
            default:
                entry.action = CandidateAction::Discarded;
                erase = true;
                break;
        }
        record.deferred_evaluations.push_back(std::move(entry));
        if (erase) {
            state_.deferred.erase(state_.deferred.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
}

WmSnapshot Engine::snapshot() const {
    WmSnapshot snap;
    snap.items.reserve(state_.perception.size());
    for (const auto& item : state_.perception) {
        SnapshotItem entry;
        entry.id = item.id;
        entry.modality = item.modality;
        entry.content = item.content;
        entry.encoded_at = item.encoded_at;
        entry.last_activated_at = item.last_activated_at;
        entry.importance = item.importance;
        entry.scores = score_item(item, state_, config_.weights);
        if (const MemoryChunk* home = state_.chunk_of(item.id)) entry.chunk_id = home->id;
        snap.items.push_back(std::move(entry));
    }
    snap.chunks.reserve(state_.episodic.size());
    for (const auto& chunk : state_.episodic) {
        snap.chunks.push_back({chunk.id, chunk.created_at, chunk.summary, chunk.item_ids});
    }
    return snap;
}

StepRecord Engine::step(const ScenarioEvent& event) {
    if (event.t < state_.now) {
        throw ContractViolation("event time " + std::to_string(event.t) +
                                " precedes the engine clock " + std::to_string(state_.now));
    }
    state_.now = event.t;

    StepRecord record;
    record.step = step_index_++;
    record.t = event.t;
    record.event = event;
    record.policy = policy_;

    const MemoryItem* newest = nullptr;
    try {
        Embedding embedding = event_embedding(event);
        record.encode_outcome = encode(event.modality, event.content, std::move(embedding),
                                       event.importance);
        if (record.encode_outcome->kind != EncodeOutcome::Kind::Refreshed) {
            try {
                record.bind_outcome = bind_or_create(record.encode_outcome->item_id, record.errors);
            } catch (const ProviderFailure& failure) {
                record_error(record.errors, "bind", failure);
                pending_unbound_.push_back(record.encode_outcome->item_id);
            }
        }
        newest = state_.find_item(record.encode_outcome->item_id);
    } catch (const ProviderFailure& failure) {
        // Encoding aborted, state unchanged; the update still runs.
        record_error(record.errors, "encode", failure);
    }

    retry_pending_binds(record.errors);

    std::vector<GeneratedAssistance> generated;
    try {
        generated = providers_.generator->generate(state_, newest, delivered_history_, policy_,
                                                   task_context_);
        for (const auto& assistance : generated) {
            if (assistance.message.empty() ||
                !(assistance.importance >= 0.0 && assistance.importance <= 1.0)) {
                throw ProviderFailure(
                    {ProviderErrorKind::MalformedResponse, "invalid assistance candidate"});
            }
        }
    } catch (const ProviderFailure& failure) {
        record_error(record.errors, "generate", failure);
        generated.clear();  // the update proceeds with zero candidates
    }

    std::vector<AssistanceCandidate> candidates;
    candidates.reserve(generated.size());
    for (auto& assistance : generated) {
        try {
            Embedding embedding =
                providers_.embedder->embed(assistance.message, Modality::Phonological);
            candidates.push_back(AssistanceCandidate{CandidateId{next_candidate_id_++},
                                                     std::move(assistance.message),
                                                     Modality::Phonological,
                                                     assistance.importance, std::move(embedding),
                                                     state_.now,
                                                     {}});
        } catch (const ProviderFailure& failure) {
            record_error(record.errors, "candidate-embed", failure);
        }
    }

    if (policy_ == Policy::Wm) {
        run_wm_policy(record, std::move(candidates));
    } else {
        run_baseline_policy(record, std::move(candidates));
    }

    record.deferred_queue.reserve(state_.deferred.size());
    for (const auto& candidate : state_.deferred) {
        record.deferred_queue.push_back({candidate.id, state_.now - candidate.created_at});
    }
    record.wm_snapshot = snapshot();
    return record;
}

}  // namespace wm
