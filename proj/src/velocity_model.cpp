#include "mlvedit/velocity_model.hpp"

#include <string>

namespace mlv {

LatentSequence eval_velocity(const VelocityModel& model, const LatentSequence& z,
                             double t, const PromptEmbedding& p,
                             const SinkContext& sink, std::size_t segment_ordinal) {
    if (z.channels() != model.channels()) {
        throw InvalidShapeError("latent has " + std::to_string(z.channels()) +
                                " channels, model expects " +
                                std::to_string(model.channels()));
    }
    if (p.dim != model.prompt_dim()) {
        throw InvalidShapeError("prompt has dim " + std::to_string(p.dim) +
                                ", model expects " +
                                std::to_string(model.prompt_dim()));
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw OutOfRangeError("velocity time " + std::to_string(t) +
                              " outside [0, 1]");
    }
    if (sink.captures() && segment_ordinal != sink.capture_source) {
        throw ProtocolError("sink capture requested from segment " +
                            std::to_string(segment_ordinal) +
                            ", only segment " + std::to_string(sink.capture_source) +
                            " may capture");
    }
    if (sink.captures() && sink.capture_cache == nullptr) {
        throw ProtocolError("sink capture requested without a cache");
    }
    if (sink.injects() && sink.inject_cache == nullptr) {
        throw ProtocolError("sink inject requested without a cache");
    }
    LatentSequence v = model.eval(z, t, p, sink, segment_ordinal);
    if (!v.same_shape(z)) {
        throw InvalidShapeError("model returned a velocity of mismatched shape");
    }
    return v;
}

LatentSequence apply_cfg(const LatentSequence& v_cond, const LatentSequence& v_uncond,
                         double w) {
    if (!v_cond.same_shape(v_uncond)) {
        throw InvalidShapeError("guidance operands differ in shape");
    }
    if (w == 1.0) return v_cond;
    if (w == 0.0) return v_uncond;
    LatentSequence out(v_cond.frames(), v_cond.channels());
    auto c = v_cond.flat();
    auto u = v_uncond.flat();
    auto o = out.flat();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = u[i] + w * (c[i] - u[i]);
    }
    return out;
}

LatentSequence delta_velocity(const VelocityModel& model, const LatentSequence& z_tar,
                              const LatentSequence& z_src, double t,
                              const PromptEmbedding& p_tar, const PromptEmbedding& p_src,
                              const SinkContext& sink, std::size_t segment_ordinal,
                              const SinkContext& source_sink) {
    if (!z_tar.same_shape(z_src)) {
        throw InvalidShapeError("target and source latents differ in shape");
    }
    LatentSequence v_tar = eval_velocity(model, z_tar, t, p_tar, sink, segment_ordinal);
    LatentSequence v_src =
        eval_velocity(model, z_src, t, p_src, source_sink, segment_ordinal);
    LatentSequence out(v_tar.frames(), v_tar.channels());
    auto a = v_tar.flat();
    auto b = v_src.flat();
    auto o = out.flat();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = a[i] - b[i];
    }
    return out;
}

} // namespace mlv
