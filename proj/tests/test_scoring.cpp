#include <doctest.h>

#include <random>

#include "wm/scoring.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace wm;

namespace {

MemoryItem item_activated_at(double t) {
    return test::make_item(1, Modality::Visuospatial, "plate", test::embed(test::basis(4, 0)),
                           t, t, 0.5);
}

}  // namespace

TEST_CASE("recency is 1 when freshly activated") {
    CHECK(score_recency(item_activated_at(10.0), 10.0, 30.0) == 1.0);
}

TEST_CASE("recency decays to 0 at T and clamps past it") {
    CHECK(score_recency(item_activated_at(0.0), 30.0, 30.0) == 0.0);
    CHECK(score_recency(item_activated_at(0.0), 45.0, 30.0) == 0.0);
}

TEST_CASE("recency at half the retention bound") {
    // oracle: 1 - 15/30
    const double expected = oracle::recency(0.0, 15.0, 30.0);
    CHECK(expected == 0.5);
    CHECK(score_recency(item_activated_at(0.0), 15.0, 30.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("recency uses last activation, not first encoding") {
    auto item = item_activated_at(0.0);
    item.last_activated_at = 20.0;
    CHECK(score_recency(item, 20.0, 30.0) == 1.0);
}

TEST_CASE("scoring before the last activation violates the clock contract") {
    CHECK_THROWS_AS(score_recency(item_activated_at(10.0), 5.0, 30.0), ContractViolation);
}

TEST_CASE("recency is non-increasing in now") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto item = item_activated_at(0.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double t1 = unit(rng) * 60.0;
        const double t2 = t1 + unit(rng) * 60.0;
        CHECK(score_recency(item, t2, 30.0) <= score_recency(item, t1, 30.0));
    }
}

TEST_CASE("relevance of an identical summary is 1") {
    Embedding e = test::embed(test::basis(4, 0));
    std::vector<MemoryChunk> buffer;
    buffer.push_back(test::make_chunk(1, 0.0, "s", test::embed(test::basis(4, 0)), {ItemId{1}}));
    CHECK(score_relevance(e, buffer) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("relevance of an empty buffer is 0") {
    CHECK(score_relevance(test::embed(test::basis(4, 0)), {}) == 0.0);
}

TEST_CASE("relevance is the mean of clamped summary similarities") {
    // chunk summaries at cosine 0.8 and 0.4 from the item
    Embedding e = test::embed(test::basis(4, 0));
    std::vector<MemoryChunk> buffer;
    buffer.push_back(test::make_chunk(1, 0.0, "a", test::embed(test::at_cosine(4, 0, 0.8, 1)),
                                      {ItemId{1}}));
    buffer.push_back(test::make_chunk(2, 0.0, "b", test::embed(test::at_cosine(4, 0, 0.4, 2)),
                                      {ItemId{2}}));
    const double expected = oracle::relevance({1, 0, 0, 0}, {test::at_cosine(4, 0, 0.8, 1),
                                                             test::at_cosine(4, 0, 0.4, 2)});
    CHECK(expected == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(score_relevance(e, buffer) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("negative similarity clamps to zero inside relevance") {
    Embedding e = test::embed(test::basis(4, 0));
    std::vector<double> opposite(4, 0.0);
    opposite[0] = -1.0;
    std::vector<MemoryChunk> buffer;
    buffer.push_back(test::make_chunk(1, 0.0, "s", test::embed(opposite), {ItemId{1}}));
    CHECK(score_relevance(e, buffer) == 0.0);
}

TEST_CASE("composite score of the displacement-figure inputs") {
    WeightsConfig weights;
    // recency 0.3, relevance 0.4, importance 0.2 with default weights
    const double expected = oracle::composite(0.3, 0.4, 0.2, 0.3, 0.4, 0.3);
    CHECK(expected == doctest::Approx(0.31).epsilon(1e-12));
    CHECK(composite_score(0.3, 0.4, 0.2, weights) == doctest::Approx(0.31).epsilon(1e-9));
}

TEST_CASE("composite score endpoints") {
    WeightsConfig weights;
    CHECK(composite_score(1.0, 1.0, 1.0, weights) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(composite_score(0.0, 0.0, 0.0, weights) == 0.0);
}

TEST_CASE("composite stays in [0,1] over the unit cube") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        WeightsConfig weights;
        // random weights summing to 1
        double a = unit(rng), b = unit(rng), c = unit(rng);
        const double sum = a + b + c;
        if (sum < 1e-9) continue;
        weights.recency_weight = a / sum;
        weights.relevance_weight = b / sum;
        weights.importance_weight = c / sum;
        const double value = composite_score(unit(rng), unit(rng), unit(rng), weights);
        CHECK(value >= -1e-12);
        CHECK(value <= 1.0 + 1e-12);
    }
}

TEST_CASE("score_item charges recency/relevance at state.now with frozen importance") {
    WorkingMemoryState state;
    state.now = 15.0;
    state.perception.push_back(item_activated_at(0.0));
    state.episodic.push_back(
        test::make_chunk(1, 0.0, "s", test::embed(test::at_cosine(4, 0, 0.8, 1)), {ItemId{1}}));
    WeightsConfig weights;
    weights.embedding_dim = 4;
    const PropertyScores scores = score_item(state.perception[0], state, weights);
    CHECK(scores.recency == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(scores.relevance == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(scores.importance == 0.5);
    CHECK(scores.composite ==
          doctest::Approx(oracle::composite(0.5, 0.8, 0.5, 0.3, 0.4, 0.3)).epsilon(1e-12));
}
