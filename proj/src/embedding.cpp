#include "wm/embedding.hpp"

#include <cmath>

namespace wm {

namespace {
constexpr double kMinNorm = 1e-12;
}

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ContractViolation("embedding must have at least one component");
    }
    double sq = 0.0;
    for (double v : values_) sq += v * v;
    const double norm = std::sqrt(sq);
    if (!(norm > kMinNorm)) {
        throw ContractViolation("embedding has no direction (zero or non-finite norm)");
    }
    for (double& v : values_) v /= norm;
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    if (a.dimension() != b.dimension()) {
        throw ContractViolation("embedding dimension mismatch");
    }
    double dot = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) dot += av[i] * bv[i];
    return dot;
}

double clamped_similarity(const Embedding& a, const Embedding& b) {
    const double c = cosine_similarity(a, b);
    return c < 0.0 ? 0.0 : c;
}

}  // namespace wm
