#include "mlvedit/prompt.hpp"

#include <cmath>
#include <utility>

namespace mlv {

PromptEmbedding PromptEmbedding::zeros(std::size_t dim, std::string label) {
    return constant(dim, 0.0, std::move(label));
}

PromptEmbedding PromptEmbedding::ones(std::size_t dim, std::string label) {
    return constant(dim, 1.0, std::move(label));
}

PromptEmbedding PromptEmbedding::constant(std::size_t dim, double value,
                                          std::string label) {
    PromptEmbedding p;
    p.dim = dim;
    p.values.assign(dim, value);
    p.label = std::move(label);
    p.validate();
    return p;
}

PromptEmbedding PromptEmbedding::random(std::size_t dim, std::uint64_t root_seed,
                                        std::uint64_t index, std::string label) {
    PromptEmbedding p;
    p.dim = dim;
    p.values.resize(dim);
    p.label = std::move(label);
    fill_normal(SeedSpec{root_seed, "prompt", index}.stream_key(), p.values);
    p.validate();
    return p;
}

double PromptEmbedding::mean() const {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(dim);
}

void PromptEmbedding::validate() const {
    if (dim == 0 || values.size() != dim) {
        throw InvalidShapeError("prompt embedding needs dim >= 1 matching its values");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw NumericDomainError("prompt embedding contains a non-finite value");
        }
    }
}

} // namespace mlv
