#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wm/errors.hpp"

namespace wm {

// Unit-length embedding vector. Every embedding in the engine is stored
// L2-normalized at construction, so cosine similarity reduces to a dot
// product and no call site re-normalizes.
class Embedding {
public:
    // Normalizes `values` in place. Throws ContractViolation for an empty
    // or (near-)zero vector, which has no direction to normalize.
    explicit Embedding(std::vector<double> values);

    std::size_t dimension() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
};

// Dot product of two unit vectors, in [-1, 1] within 1e-9.
// Throws ContractViolation on dimension mismatch.
double cosine_similarity(const Embedding& a, const Embedding& b);

// max(0, cosine_similarity(a, b)). The scoring formulas treat similarity as
// a [0,1] quantity, so negative cosine clamps to zero before use.
double clamped_similarity(const Embedding& a, const Embedding& b);

}  // namespace wm
