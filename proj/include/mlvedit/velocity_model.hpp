#pragma once

#include <cstddef>

#include "mlvedit/attention.hpp"
#include "mlvedit/prompt.hpp"
#include "mlvedit/tensor.hpp"

namespace mlv {

// Per-evaluation instructions for the anchor mechanism. The engine owns the
// caches; a model only reads/writes through the pointers it is handed.
struct SinkContext {
    enum class Mode {
        Off,           // plain attention
        Capture,       // store this segment's anchor rows, attend plainly
        Inject,        // prepend a previously captured anchor
        CaptureInject, // both: cache for a later consumer while injecting
    };

    Mode mode = Mode::Off;
    AnchorCache* capture_cache = nullptr;      // written in Capture/CaptureInject
    const AnchorCache* inject_cache = nullptr; // read in Inject/CaptureInject
    std::size_t timestep_index = 0;
    std::size_t anchor_token_count = 1;
    // Ordinal that is allowed to capture; 0 except under the previous-segment
    // anchor policy, where each segment feeds the next.
    std::size_t capture_source = 0;

    bool captures() const { return mode == Mode::Capture || mode == Mode::CaptureInject; }
    bool injects() const { return mode == Mode::Inject || mode == Mode::CaptureInject; }

    static SinkContext off() { return {}; }
};

// V(Z, t, P): maps a latent segment to a same-shape velocity field.
// Implementations are immutable after construction and reentrant except for
// sink captures, which the engine serializes.
class VelocityModel {
public:
    virtual ~VelocityModel() = default;

    virtual std::size_t channels() const = 0;
    virtual std::size_t prompt_dim() const = 0;

    virtual LatentSequence eval(const LatentSequence& z, double t,
                                const PromptEmbedding& p, const SinkContext& sink,
                                std::size_t segment_ordinal) const = 0;
};

// Validated front door for every model evaluation.
LatentSequence eval_velocity(const VelocityModel& model, const LatentSequence& z,
                             double t, const PromptEmbedding& p,
                             const SinkContext& sink, std::size_t segment_ordinal);

// v_uncond + w * (v_cond - v_uncond); returns the endpoint operand bitwise
// at w == 1 and w == 0.
LatentSequence apply_cfg(const LatentSequence& v_cond, const LatentSequence& v_uncond,
                         double w);

// Target-branch velocity (sink active) minus source-branch velocity. The
// source branch runs with its own context, normally off.
LatentSequence delta_velocity(const VelocityModel& model, const LatentSequence& z_tar,
                              const LatentSequence& z_src, double t,
                              const PromptEmbedding& p_tar, const PromptEmbedding& p_src,
                              const SinkContext& sink, std::size_t segment_ordinal,
                              const SinkContext& source_sink = SinkContext::off());

} // namespace mlv
