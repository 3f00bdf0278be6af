#pragma once

#include <cstdint>
#include <vector>

#include "mlvedit/schedule.hpp"
#include "mlvedit/segment.hpp"
#include "mlvedit/velocity_model.hpp"

namespace mlv {

enum class EditMode { Mlv, Naive, Wan };

struct EditConfig {
    std::size_t T = 25;     // denoising steps
    double cfg_scale = 7.5; // guidance weight w
    std::size_t n = 21;     // segment length
    std::size_t k = 5;      // overlap length
    std::uint64_t root_seed = 0;
    SinkPolicy sink_policy = SinkPolicy::FirstOfInitial;
    std::size_t anchor_frames = 1; // frames cached as the anchor (T_a)
    bool blend_enabled = true;
    bool sink_on_source = false; // give the source branch its own anchor caches

    void validate() const;
};

// One row per (step, interior boundary): the velocity-difference seam before
// and after blending, plus the two segments' overall magnitudes.
struct BoundaryTraceRow {
    std::size_t step = 0;
    double time = 0.0;
    std::size_t boundary = 0; // boundary b sits between spans b-1 and b
    double pre_blend_jump = 0.0;
    double post_blend_jump = 0.0;
    double dv_norm_prev = 0.0;
    double dv_norm_curr = 0.0;
};

// Test hook: how many Euler writes each global frame received in one step.
struct StepDiagnostics {
    std::vector<std::size_t> write_counts;
};

struct EditState {
    LatentSequence z_edit; // starts as X_src so the first target equals the source
    std::size_t step = 0;  // next step consumes times[step] -> times[step+1]
    TimestepSchedule schedule;
    SegmentPlan plan;
};

struct EditResult {
    LatentSequence latent;
    SegmentPlan plan;
    std::vector<BoundaryTraceRow> trace;
};

EditState make_edit_state(const LatentSequence& x_src, const EditConfig& config);

// Whole-sequence baseline: one model call per branch, no segmentation, no
// sink. Returns Z_edit advanced from t_i to t_prev.
LatentSequence wan_edit_step(const LatentSequence& z_edit, const LatentSequence& x_src,
                             double t_i, double t_prev, const PromptEmbedding& p_src,
                             const PromptEmbedding& p_tar, const VelocityModel& model,
                             double w, std::uint64_t root_seed,
                             std::size_t timestep_index);

// One segmented step: shared noise, per-segment guided velocity differences,
// anchor capture/injection per config.sink_policy, triangular blending over
// overlaps, one Euler write per frame.
EditState mlv_edit_step(EditState state, const LatentSequence& x_src,
                        const PromptEmbedding& p_src, const PromptEmbedding& p_tar,
                        const VelocityModel& model, const EditConfig& config,
                        std::vector<BoundaryTraceRow>* trace = nullptr,
                        StepDiagnostics* diag = nullptr);

// Ablation baseline: same segmentation, but overlap frames take the later
// segment's velocity difference unchanged and no anchors are used.
EditState naive_stitch_step(EditState state, const LatentSequence& x_src,
                            const PromptEmbedding& p_src, const PromptEmbedding& p_tar,
                            const VelocityModel& model, const EditConfig& config,
                            std::vector<BoundaryTraceRow>* trace = nullptr,
                            StepDiagnostics* diag = nullptr);

// Full integration from t = 1 down to t = 0 in the chosen mode.
EditResult run_edit(const LatentSequence& x_src, const PromptEmbedding& p_src,
                    const PromptEmbedding& p_tar, const VelocityModel& model,
                    const EditConfig& config, EditMode mode, bool want_trace = false);

} // namespace mlv
