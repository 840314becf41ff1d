#include <doctest.h>

#include <random>

#include "wm/engine.hpp"
#include "wm/mock_providers.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace wm;

namespace {

ScenarioEvent visual(double t, std::string content, std::optional<double> importance = {}) {
    ScenarioEvent event;
    event.t = t;
    event.modality = Modality::Visuospatial;
    event.content = std::move(content);
    event.importance = importance;
    return event;
}

ScenarioEvent speech(double t, std::string content, std::optional<double> importance = {}) {
    ScenarioEvent event = visual(t, std::move(content), importance);
    event.modality = Modality::Phonological;
    return event;
}

struct EngineFixture {
    EngineFixture() : mocks(7, 64), engine(RunConfig{}, mocks.set(), Policy::Wm, "task") {}

    StepRecord step(const ScenarioEvent& event) {
        mocks.importance.set_ground_truth(event.importance);
        for (const auto& hint : event.assist_hints) {
            mocks.generator.register_hint(hint.trigger, hint.message, hint.importance);
        }
        auto record = engine.step(event);
        engine.validate();
        return record;
    }

    MockProviders mocks;
    Engine engine;
};

// Provider stubs for the failure paths.
class FlakyImportanceScorer final : public ImportanceScorer {
public:
    bool failing = false;
    double score(std::string_view, std::string_view) override {
        if (failing) throw ProviderFailure({ProviderErrorKind::Unavailable, "scorer offline"});
        return 0.5;
    }
};

class FlakySummarizer final : public Summarizer {
public:
    bool failing = false;
    MockSummarizer inner;
    std::string summarize(const std::vector<const MemoryItem*>& items,
                          std::string_view task_context) override {
        if (failing) throw ProviderFailure({ProviderErrorKind::Timeout, "summarizer timeout"});
        return inner.summarize(items, task_context);
    }
};

}  // namespace

TEST_CASE("encoding into an empty store adds the item and creates a chunk") {
    EngineFixture fx;
    const auto record = fx.step(visual(0.0, "plate"));
    REQUIRE(record.encode_outcome.has_value());
    CHECK(record.encode_outcome->kind == EncodeOutcome::Kind::Added);
    CHECK(fx.engine.state().perception.size() == 1);
    REQUIRE(record.bind_outcome.has_value());
    CHECK(record.bind_outcome->kind == BindOutcome::Kind::Created);
    CHECK(fx.engine.state().episodic.size() == 1);
    CHECK(fx.engine.state().episodic[0].summary == "User context: plate");
}

TEST_CASE("re-encoding identical content refreshes instead of growing") {
    EngineFixture fx;
    fx.step(visual(0.0, "plate"));
    const auto record = fx.step(visual(5.0, "plate"));
    REQUIRE(record.encode_outcome.has_value());
    CHECK(record.encode_outcome->kind == EncodeOutcome::Kind::Refreshed);
    CHECK_FALSE(record.bind_outcome.has_value());
    CHECK(fx.engine.state().perception.size() == 1);
    CHECK(fx.engine.state().perception[0].last_activated_at == 5.0);
    // refresh strictly raises recency at the second event time
    CHECK(score_recency(fx.engine.state().perception[0], 5.0, 30.0) == 1.0);
}

TEST_CASE("a refresh keeps content, embedding and importance") {
    EngineFixture fx;
    fx.step(visual(0.0, "plate", 0.8));
    fx.step(visual(5.0, "plate", 0.1));
    CHECK(fx.engine.state().perception[0].importance == 0.8);
    CHECK(fx.engine.state().perception[0].encoded_at == 0.0);
}

TEST_CASE("the eighth distinct item displaces the brute-force victim") {
    EngineFixture fx;
    const char* labels[] = {"plate", "cup", "fork", "spoon", "bowl", "vase", "apple"};
    double t = 0.0;
    for (const char* label : labels) fx.step(visual(t += 1.0, label, 0.5));
    REQUIRE(fx.engine.state().perception.size() == 7);

    // oracle over the live state at the next event time
    std::vector<oracle::Item> items;
    for (const auto& item : fx.engine.state().perception) {
        items.push_back({raw(item.id), item.encoded_at, item.last_activated_at, item.importance,
                         {item.embedding.values().begin(), item.embedding.values().end()}});
    }
    std::vector<oracle::Vec> summaries;
    for (const auto& chunk : fx.engine.state().episodic) {
        summaries.emplace_back(chunk.summary_embedding.values().begin(),
                               chunk.summary_embedding.values().end());
    }
    const auto expected = items[oracle::victim_index(items, summaries, 8.0, {})].id;

    const auto record = fx.step(visual(8.0, "banana", 0.5));
    REQUIRE(record.encode_outcome.has_value());
    CHECK(record.encode_outcome->kind == EncodeOutcome::Kind::Displaced);
    REQUIRE(record.encode_outcome->displaced_id.has_value());
    CHECK(raw(*record.encode_outcome->displaced_id) == expected);
    CHECK(fx.engine.state().perception.size() == 7);
}

TEST_CASE("scorer failure aborts the encode and leaves the state unchanged") {
    MockProviders mocks(7, 64);
    FlakyImportanceScorer scorer;
    ProviderSet providers = mocks.set();
    providers.importance = &scorer;
    Engine engine(RunConfig{}, providers, Policy::Wm, "task");

    engine.step(visual(0.0, "plate"));
    CHECK(engine.state().perception.size() == 1);

    scorer.failing = true;
    const auto record = engine.step(visual(1.0, "cup"));
    CHECK_FALSE(record.encode_outcome.has_value());
    REQUIRE(record.errors.size() == 1);
    CHECK(record.errors[0].find("unavailable") != std::string::npos);
    CHECK(engine.state().perception.size() == 1);
    engine.validate();

    // recovered provider encodes normally again
    scorer.failing = false;
    const auto next = engine.step(visual(2.0, "cup"));
    CHECK(next.encode_outcome->kind == EncodeOutcome::Kind::Added);
}

TEST_CASE("summarizer failure leaves the item unbound until the next update") {
    MockProviders mocks(7, 64);
    FlakySummarizer summarizer;
    ProviderSet providers = mocks.set();
    providers.summarizer = &summarizer;
    Engine engine(RunConfig{}, providers, Policy::Wm, "task");

    summarizer.failing = true;
    const auto record = engine.step(visual(0.0, "plate"));
    REQUIRE(record.encode_outcome.has_value());
    CHECK_FALSE(record.bind_outcome.has_value());
    CHECK(record.errors.size() == 1);
    CHECK(engine.state().episodic.empty());
    engine.validate();  // partition holds with the item pending

    summarizer.failing = false;
    engine.step(visual(1.0, "cup"));
    engine.validate();
    // both the new item and the retried one are chunked now
    CHECK(engine.state().episodic.size() >= 1);
    std::size_t chunked = 0;
    for (const auto& chunk : engine.state().episodic) chunked += chunk.item_ids.size();
    CHECK(chunked == engine.state().perception.size());
}

TEST_CASE("binding joins a chunk when the score clears theta") {
    // second item shares the first's token, so episode and member
    // similarities are high under the mock embedder
    EngineFixture fx;
    fx.step(visual(0.0, "fork"));
    const auto record = fx.step(visual(1.0, "fork spoon"));
    REQUIRE(record.bind_outcome.has_value());
    if (record.bind_outcome->kind == BindOutcome::Kind::Bound) {
        CHECK(*record.bind_outcome->score > fx.engine.weights().binding_threshold);
        CHECK(fx.engine.state().episodic.size() == 1);
        CHECK(fx.engine.state().episodic[0].item_ids.size() == 2);
        // gaining a member regenerated the summary
        CHECK(fx.engine.state().episodic[0].summary == "User context: fork, fork spoon");
    } else {
        FAIL("expected Bound, got a created chunk; binding geometry regressed");
    }
}

TEST_CASE("bound outcomes always record a score above theta") {
    EngineFixture fx;
    const char* labels[] = {"red mug",  "blue mug", "green mug", "mug rack",
                            "tea mug",  "mug shelf", "coffee mug"};
    double t = 0.0;
    for (const char* label : labels) {
        const auto record = fx.step(visual(t += 1.0, label, 0.5));
        if (record.bind_outcome && record.bind_outcome->kind == BindOutcome::Kind::Bound) {
            CHECK(*record.bind_outcome->score > fx.engine.weights().binding_threshold);
        }
        if (record.bind_outcome && record.bind_outcome->kind == BindOutcome::Kind::Created) {
            for (const auto& entry : record.bind_outcome->candidate_scores) {
                CHECK(entry.score <= fx.engine.weights().binding_threshold);
            }
        }
    }
}

TEST_CASE("a full buffer evicts the lowest-mean chunk and re-homes its items") {
    EngineFixture fx;
    // four token-disjoint contexts fill the buffer
    fx.step(visual(0.0, "alpha", 0.1));
    fx.step(visual(1.0, "bravo", 0.9));
    fx.step(visual(2.0, "charlie", 0.9));
    fx.step(visual(3.0, "delta", 0.9));
    REQUIRE(fx.engine.state().episodic.size() == 4);

    // oracle for the eviction at t=40: alpha has decayed and is unimportant
    std::vector<oracle::Item> items;
    for (const auto& item : fx.engine.state().perception) {
        items.push_back({raw(item.id), item.encoded_at, item.last_activated_at, item.importance,
                         {item.embedding.values().begin(), item.embedding.values().end()}});
    }
    std::vector<oracle::Vec> summaries;
    std::vector<oracle::Chunk> chunks;
    for (const auto& chunk : fx.engine.state().episodic) {
        summaries.emplace_back(chunk.summary_embedding.values().begin(),
                               chunk.summary_embedding.values().end());
        oracle::Chunk mirrored{raw(chunk.id), chunk.created_at, {}};
        for (ItemId member : chunk.item_ids) {
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (items[i].id == raw(member)) mirrored.member_indices.push_back(i);
            }
        }
        chunks.push_back(std::move(mirrored));
    }
    const auto expected =
        chunks[oracle::eviction_index(chunks, items, summaries, 40.0, {})].id;

    const auto record = fx.step(visual(40.0, "echo", 0.9));
    REQUIRE(record.bind_outcome.has_value());
    CHECK(record.bind_outcome->kind == BindOutcome::Kind::CreatedWithDisplacement);
    REQUIRE(record.bind_outcome->evicted_id.has_value());
    CHECK(raw(*record.bind_outcome->evicted_id) == expected);
    CHECK(fx.engine.state().episodic.size() <= 4);
    // the evicted chunk's items survive in the perception store
    CHECK(fx.engine.state().perception.size() == 5);
}

TEST_CASE("displaced items leave their chunk and empty chunks are deleted") {
    EngineFixture fx;
    // one stale unimportant item in its own chunk, then six fresh shared-token ones
    fx.step(visual(0.0, "zulu", 0.0));
    const char* labels[] = {"red mug", "blue mug", "green mug", "tea mug", "mug rack", "mug shelf"};
    double t = 35.0;
    for (const char* label : labels) fx.step(visual(t += 1.0, label, 0.9));
    REQUIRE(fx.engine.state().perception.size() == 7);

    const auto record = fx.step(visual(45.0, "coffee mug", 0.9));
    REQUIRE(record.encode_outcome.has_value());
    CHECK(record.encode_outcome->kind == EncodeOutcome::Kind::Displaced);
    CHECK(raw(*record.encode_outcome->displaced_id) == 1);  // the zulu item
    // zulu's singleton chunk is gone with it
    for (const auto& chunk : fx.engine.state().episodic) {
        for (ItemId member : chunk.item_ids) CHECK(raw(member) != 1);
    }
}

TEST_CASE("capacity and partition invariants hold under a random stream") {
    EngineFixture fx;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const char* words[] = {"plate", "cup",  "fork",   "spoon",  "bowl",   "vase",
                           "apple", "mug",  "laptop", "candle", "teapot", "remote",
                           "book",  "tie",  "clock",  "marker", "orange", "banana"};
    double t = 0.0;
    for (int i = 0; i < 300; ++i) {
        t += unit(rng) * 3.0;
        std::string content = words[rng() % 18];
        if (unit(rng) < 0.3) content += std::string(" ") + words[rng() % 18];
        auto event = unit(rng) < 0.5 ? visual(t, content, unit(rng)) : speech(t, content, unit(rng));
        fx.step(event);  // validates after every step
        CHECK(fx.engine.state().perception.size() <= 7);
        CHECK(fx.engine.state().episodic.size() <= 4);
    }
}

TEST_CASE("a hint delivery encodes the message as a phonological item") {
    EngineFixture fx;
    ScenarioEvent event = visual(0.0, "fork", 0.9);
    event.assist_hints.push_back({"fork", "You might need more utensils for all guests", 0.9});
    const auto record = fx.step(event);
    REQUIRE(record.candidates.size() == 1);
    CHECK(record.candidates[0].decision == DecisionKind::Deliver);
    CHECK(record.candidates[0].action == CandidateAction::Delivered);
    REQUIRE(record.candidates[0].encode_outcome.has_value());
    bool found = false;
    for (const auto& item : fx.engine.state().perception) {
        if (item.modality == Modality::Phonological &&
            item.content == "You might need more utensils for all guests") {
            found = true;
            CHECK(item.importance == 0.9);  // frozen from the generator, no scorer call
        }
    }
    CHECK(found);
    CHECK(fx.engine.delivered_history().size() == 1);
}

TEST_CASE("delivering a duplicate message refreshes the existing item") {
    EngineFixture fx;
    ScenarioEvent first = visual(0.0, "fork", 0.9);
    first.assist_hints.push_back({"fork", "More utensils needed", 0.9});
    fx.step(first);

    ScenarioEvent second = visual(1.0, "spoon", 0.9);
    second.assist_hints.push_back({"spoon", "More utensils needed", 0.9});
    const auto record = fx.step(second);
    REQUIRE(record.candidates.size() == 1);
    if (record.candidates[0].action == CandidateAction::Delivered) {
        REQUIRE(record.candidates[0].encode_outcome.has_value());
        CHECK(record.candidates[0].encode_outcome->kind == EncodeOutcome::Kind::Refreshed);
    }
}

TEST_CASE("baseline policy delivers every generated candidate") {
    MockProviders mocks(7, 64);
    Engine engine(RunConfig{}, mocks.set(), Policy::Baseline, "task");
    ScenarioEvent event = visual(0.0, "fork", 0.9);
    mocks.generator.register_hint("fork", "low value hint", 0.0);
    mocks.generator.register_hint("fork", "another low value hint", 0.0);
    mocks.importance.set_ground_truth(event.importance);
    const auto record = engine.step(event);
    REQUIRE(record.candidates.size() == 2);
    for (const auto& candidate : record.candidates) {
        CHECK(candidate.action == CandidateAction::Delivered);
        CHECK_FALSE(candidate.breakdown.has_value());  // no utility computation
    }
    CHECK(record.deferred_queue.empty());
    CHECK(engine.delivered_history().size() == 2);
}

TEST_CASE("deferred candidates expire strictly past the ttl") {
    RunConfig config;
    MockProviders mocks(config.weights.seed, config.weights.embedding_dim);
    Engine engine(config, mocks.set(), Policy::Wm, "task");

    // moderate importance, empty interference: utility lands in (0, 0.75]
    ScenarioEvent event = visual(0.0, "wine bottle", 0.5);
    mocks.importance.set_ground_truth(0.5);
    mocks.generator.register_hint("wine bottle", "Mind the wine bottle on the edge", 0.75);
    auto record = engine.step(event);
    REQUIRE(record.candidates.size() == 1);
    CHECK(record.candidates[0].action == CandidateAction::Deferred);
    CHECK(record.deferred_queue.size() == 1);

    // at exactly ttl the candidate is still eligible (agge is not greater)
    mocks.importance.set_ground_truth(0.5);
    record = engine.step(visual(60.0, "unrelated carpet"));
    CHECK(record.deferred_evaluations.size() == 1);
    CHECK(record.deferred_evaluations[0].decision != DecisionKind::Expire);

    mocks.importance.set_ground_truth(0.5);
    record = engine.step(visual(61.0, "another unrelated thing"));
    bool expired = false;
    for (const auto& evaluation : record.deferred_evaluations) {
        if (evaluation.decision == DecisionKind::Expire) {
            expired = true;
            CHECK(evaluation.action == CandidateAction::Expired);
            CHECK_FALSE(evaluation.breakdown.has_value());
        }
    }
    CHECK(expired);
    CHECK(engine.state().deferred.empty());
}

TEST_CASE("at most one deferred delivery per update; the rest stay queued") {
    RunConfig config;
    MockProviders mocks(config.weights.seed, config.weights.embedding_dim);
    Engine engine(config, mocks.set(), Policy::Wm, "task");

    // Two candidates with importance high enough to deliver once relevance
    // rises, but deferred at generation time (no episode context for them).
    ScenarioEvent seed_event = visual(0.0, "alpha", 0.5);
    seed_event.assist_hints.push_back({"alpha", "remember the alpha alpha", 0.95});
    seed_event.assist_hints.push_back({"alpha", "alpha alpha says hello", 0.95});
    mocks.importance.set_ground_truth(0.5);
    auto record = engine.step(seed_event);
    REQUIRE(record.candidates.size() == 2);

    // Count queue deliveries per update over the following steps: never two.
    double t = 1.0;
    for (int i = 0; i < 10; ++i) {
        mocks.importance.set_ground_truth(0.9);
        record = engine.step(visual(t += 1.0, "alpha alpha alpha", 0.9));
        int delivered = 0;
        for (const auto& evaluation : record.deferred_evaluations) {
            if (evaluation.action == CandidateAction::Delivered) ++delivered;
        }
        CHECK(delivered <= 1);
    }
}

TEST_CASE("events with precomputed embeddings bypass the embedder") {
    RunConfig config;
    config.weights.embedding_dim = 4;
    MockProviders mocks(0, 4);
    Engine engine(config, mocks.set(), Policy::Wm, "task");
    ScenarioEvent event = visual(0.0, "anything", 0.5);
    event.embedding = test::basis(4, 0);
    const auto record = engine.step(event);
    REQUIRE(record.encode_outcome.has_value());
    const auto& stored = engine.state().perception[0].embedding;
    CHECK(stored.values()[0] == 1.0);
    CHECK(stored.values()[1] == 0.0);
}

TEST_CASE("the engine clock must not run backwards") {
    EngineFixture fx;
    fx.step(visual(5.0, "plate"));
    CHECK_THROWS_AS(fx.engine.step(visual(4.0, "cup")), ContractViolation);
}
