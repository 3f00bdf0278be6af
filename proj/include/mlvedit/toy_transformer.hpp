#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mlvedit/segment.hpp"
#include "mlvedit/velocity_model.hpp"

namespace mlv {

// Frozen weights of the desk-scale backbone: a per-frame linear embedding of
// [latent ∥ prompt ∥ t], a stack of single-head attention + tanh-MLP blocks
// with residual connections, and a linear read-out. No biases, no layer
// norm, no positional encoding. One token per frame.
struct ToyTransformerParams {
    std::size_t channels = 4;   // C
    std::size_t prompt_dim = 8; // D
    std::size_t model_dim = 32; // d
    std::size_t layers = 2;

    struct LayerParams {
        Matrix w_q, w_k, w_v, w_o; // d x d
        Matrix w1;                 // 4d x d
        Matrix w2;                 // d x 4d
    };

    Matrix w_in;                    // d x (C + D + 1)
    std::vector<LayerParams> layer; // size `layers`
    Matrix w_out;                   // C x d
    std::uint64_t init_seed = 0;

    void validate() const;
};

// Gaussian init with per-matrix variance 1/fan_in, drawn from streams named
// after each matrix so fixtures are stable across platforms.
ToyTransformerParams init_toy_params(std::size_t channels, std::size_t prompt_dim,
                                     std::size_t model_dim, std::size_t layers,
                                     std::uint64_t seed);

// "MLVTTP01" container: magic, dimension header, then matrices in
// declaration order as little-endian doubles.
void save_toy_params(const std::filesystem::path& path,
                     const ToyTransformerParams& params);
ToyTransformerParams load_toy_params(const std::filesystem::path& path);

class ToyTransformer final : public VelocityModel {
public:
    explicit ToyTransformer(ToyTransformerParams params,
                            double jitter_magnitude = 0.0,
                            std::uint64_t jitter_seed = 0);

    std::size_t channels() const override { return params_.channels; }
    std::size_t prompt_dim() const override { return params_.prompt_dim; }

    LatentSequence eval(const LatentSequence& z, double t, const PromptEmbedding& p,
                        const SinkContext& sink,
                        std::size_t segment_ordinal) const override;

    // Same forward pass, optionally surfacing the post-block activations
    // (one d-vector per frame), the feature space of the skip-similarity
    // metric.
    LatentSequence eval_with_features(const LatentSequence& z, double t,
                                      const PromptEmbedding& p,
                                      const SinkContext& sink,
                                      std::size_t segment_ordinal,
                                      Matrix* features) const;

    const ToyTransformerParams& params() const { return params_; }
    double jitter_magnitude() const { return jitter_magnitude_; }

private:
    ToyTransformerParams params_;
    double jitter_magnitude_ = 0.0;
    std::uint64_t jitter_seed_ = 0;
};

// Per-frame feature table for a full latent: every plan segment is evaluated
// independently (sink off), and each frame keeps the activations from the
// last segment containing it, mirroring the splice ownership convention.
Matrix segment_features(const ToyTransformer& model, const LatentSequence& z,
                        const SegmentPlan& plan, double t, const PromptEmbedding& p);

} // namespace mlv
