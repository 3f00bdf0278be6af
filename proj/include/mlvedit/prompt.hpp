#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlvedit/rng.hpp"

namespace mlv {

// Fixed-width stand-in for an encoded text prompt. There is no text encoder
// here; experiments pick embeddings directly.
struct PromptEmbedding {
    std::size_t dim = 0;
    std::vector<double> values;
    std::string label;

    static PromptEmbedding zeros(std::size_t dim, std::string label = "zeros");
    static PromptEmbedding ones(std::size_t dim, std::string label = "ones");
    static PromptEmbedding constant(std::size_t dim, double value, std::string label);
    static PromptEmbedding random(std::size_t dim, std::uint64_t root_seed,
                                  std::uint64_t index, std::string label);

    double mean() const;
    void validate() const;
};

} // namespace mlv
