#include "mlvedit/analytic_model.hpp"

#include <cmath>
#include <utility>

namespace mlv {

void AnalyticSpec::validate() const {
    if (channels == 0 || prompt_dim == 0) {
        throw InvalidConfigError("analytic oracle needs positive channel and prompt dims");
    }
    if (base.size() != channels || edit_gain.size() != channels) {
        throw InvalidShapeError("analytic oracle base/edit_gain must have one value per channel");
    }
    for (double v : base) {
        if (!std::isfinite(v)) throw NumericDomainError("analytic base is non-finite");
    }
    for (double v : edit_gain) {
        if (!std::isfinite(v)) throw NumericDomainError("analytic edit_gain is non-finite");
    }
    if (!std::isfinite(bias_magnitude)) {
        throw NumericDomainError("analytic bias_magnitude is non-finite");
    }
}

AnalyticVelocityModel::AnalyticVelocityModel(AnalyticSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
}

std::vector<double> AnalyticVelocityModel::segment_bias(std::size_t segment_ordinal) const {
    std::vector<double> dir(spec_.channels, 0.0);
    if (spec_.bias_magnitude == 0.0) return dir;
    fill_normal(SeedSpec{spec_.bias_seed, "segment_bias", segment_ordinal}.stream_key(),
                dir);
    double norm_sq = 0.0;
    for (double v : dir) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    for (double& v : dir) v /= norm;
    return dir;
}

LatentSequence AnalyticVelocityModel::eval(const LatentSequence& z, double /*t*/,
                                           const PromptEmbedding& p,
                                           const SinkContext& /*sink*/,
                                           std::size_t segment_ordinal) const {
    const double pm = p.mean();
    const std::vector<double> bias = segment_bias(segment_ordinal);
    LatentSequence out(z.frames(), z.channels());
    for (std::size_t f = 0; f < z.frames(); ++f) {
        auto row = out.frame(f);
        for (std::size_t c = 0; c < z.channels(); ++c) {
            row[c] = spec_.base[c] +
                     pm * (spec_.edit_gain[c] + spec_.bias_magnitude * bias[c]);
        }
    }
    return out;
}

AnalyticVelocityModel make_constant_oracle(std::size_t channels, std::size_t prompt_dim,
                                           std::vector<double> value) {
    AnalyticSpec spec;
    spec.channels = channels;
    spec.prompt_dim = prompt_dim;
    spec.base = std::move(value);
    spec.edit_gain.assign(channels, 0.0);
    return AnalyticVelocityModel(std::move(spec));
}

AnalyticVelocityModel make_prompt_edit_oracle(std::size_t channels,
                                              std::size_t prompt_dim,
                                              std::vector<double> gain) {
    AnalyticSpec spec;
    spec.channels = channels;
    spec.prompt_dim = prompt_dim;
    spec.base.assign(channels, 0.0);
    spec.edit_gain = std::move(gain);
    return AnalyticVelocityModel(std::move(spec));
}

AnalyticVelocityModel make_segment_bias_oracle(std::size_t channels,
                                               std::size_t prompt_dim,
                                               std::vector<double> gain,
                                               double bias_magnitude,
                                               std::uint64_t bias_seed) {
    AnalyticSpec spec;
    spec.channels = channels;
    spec.prompt_dim = prompt_dim;
    spec.base.assign(channels, 0.0);
    spec.edit_gain = std::move(gain);
    spec.bias_magnitude = bias_magnitude;
    spec.bias_seed = bias_seed;
    return AnalyticVelocityModel(std::move(spec));
}

} // namespace mlv
