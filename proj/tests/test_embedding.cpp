#include <doctest.h>

#include <cmath>
#include <random>

#include "wm/embedding.hpp"

#include "helpers.hpp"

using wm::clamped_similarity;
using wm::ContractViolation;
using wm::cosine_similarity;
using wm::Embedding;

TEST_CASE("embeddings are unit-norm after construction") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> spread(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(16);
        for (auto& x : v) x = spread(rng);
        double sq = 0.0;
        for (double x : v) sq += x * x;
        if (sq < 1e-10) continue;
        Embedding e(v);
        double norm_sq = 0.0;
        for (double x : e.values()) norm_sq += x * x;
        CHECK(std::abs(std::sqrt(norm_sq) - 1.0) <= 1e-9);
    }
}

TEST_CASE("normalization is idempotent to 1e-12") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        Embedding once(test::random_unit(rng, 32));
        std::vector<double> again(once.values().begin(), once.values().end());
        Embedding twice(again);
        for (std::size_t i = 0; i < once.dimension(); ++i) {
            CHECK(std::abs(once.values()[i] - twice.values()[i]) <= 1e-12);
        }
    }
}

TEST_CASE("cosine of a vector with itself is 1") {
    Embedding v(std::vector<double>{0.3, -0.2, 0.9, 0.1});
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(clamped_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("standard basis vectors are orthogonal") {
    Embedding e1(test::basis(4, 0));
    Embedding e2(test::basis(4, 1));
    CHECK(cosine_similarity(e1, e2) == 0.0);
    CHECK(clamped_similarity(e1, e2) == 0.0);
}

TEST_CASE("antipodal vectors have cosine -1, clamped to 0") {
    Embedding v(std::vector<double>{0.5, 0.5, -0.7});
    std::vector<double> negated;
    for (double x : v.values()) negated.push_back(-x);
    Embedding w(negated);
    CHECK(cosine_similarity(v, w) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(clamped_similarity(v, w) == 0.0);
}

TEST_CASE("similarity is symmetric, exactly") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Embedding a(test::random_unit(rng, 16));
        Embedding b(test::random_unit(rng, 16));
        CHECK(clamped_similarity(a, b) == clamped_similarity(b, a));
        CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
    }
}

TEST_CASE("cosine stays within [-1,1] to tolerance") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        Embedding a(test::random_unit(rng, 8));
        Embedding b(test::random_unit(rng, 8));
        const double c = cosine_similarity(a, b);
        CHECK(c >= -1.0 - 1e-9);
        CHECK(c <= 1.0 + 1e-9);
    }
}

TEST_CASE("constructor rejects degenerate vectors") {
    CHECK_THROWS_AS(Embedding(std::vector<double>{}), ContractViolation);
    CHECK_THROWS_AS(Embedding(std::vector<double>{0.0, 0.0, 0.0}), ContractViolation);
}

TEST_CASE("dimension mismatch is a contract violation") {
    Embedding a(test::basis(4, 0));
    Embedding b(test::basis(5, 0));
    CHECK_THROWS_AS(cosine_similarity(a, b), ContractViolation);
    CHECK_THROWS_AS(clamped_similarity(a, b), ContractViolation);
}
