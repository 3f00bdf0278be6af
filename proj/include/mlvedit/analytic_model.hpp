#pragma once

#include <cstdint>
#include <vector>

#include "mlvedit/velocity_model.hpp"

namespace mlv {

// Closed-form velocity oracle. Every output frame is
//   base[c] + mean(P) * (edit_gain[c] + bias_magnitude * u_s[c])
// where u_s is a unit vector keyed by (bias_seed, segment ordinal). The
// latent and the time never enter, so integration has an exact answer.
//
// The prompt-mean coupling makes the target/source difference controllable:
// with an all-ones target prompt and an all-zeros source prompt, the
// velocity difference is exactly edit_gain + bias_magnitude * u_s.
struct AnalyticSpec {
    std::size_t channels = 4;
    std::size_t prompt_dim = 8;
    std::vector<double> base;      // size channels
    std::vector<double> edit_gain; // size channels
    double bias_magnitude = 0.0;
    std::uint64_t bias_seed = 0;

    void validate() const;
};

class AnalyticVelocityModel final : public VelocityModel {
public:
    explicit AnalyticVelocityModel(AnalyticSpec spec);

    std::size_t channels() const override { return spec_.channels; }
    std::size_t prompt_dim() const override { return spec_.prompt_dim; }

    LatentSequence eval(const LatentSequence& z, double t, const PromptEmbedding& p,
                        const SinkContext& sink,
                        std::size_t segment_ordinal) const override;

    // The unit drift direction for a segment ordinal; exposed for tests.
    std::vector<double> segment_bias(std::size_t segment_ordinal) const;

    const AnalyticSpec& spec() const { return spec_; }

private:
    AnalyticSpec spec_;
};

// Output identically `value` per channel, whatever the inputs.
AnalyticVelocityModel make_constant_oracle(std::size_t channels,
                                           std::size_t prompt_dim,
                                           std::vector<double> value);

// Output mean(P) * gain: zero for a zero prompt, `gain` for an all-ones one.
AnalyticVelocityModel make_prompt_edit_oracle(std::size_t channels,
                                              std::size_t prompt_dim,
                                              std::vector<double> gain);

// prompt_edit plus a per-segment drift of the given magnitude.
AnalyticVelocityModel make_segment_bias_oracle(std::size_t channels,
                                               std::size_t prompt_dim,
                                               std::vector<double> gain,
                                               double bias_magnitude,
                                               std::uint64_t bias_seed);

} // namespace mlv
