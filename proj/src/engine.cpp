#include "mlvedit/engine.hpp"

#include <cmath>
#include <string>

#include "mlvedit/blend.hpp"
#include "mlvedit/metrics.hpp"

namespace mlv {

void EditConfig::validate() const {
    if (T < 1) {
        throw InvalidConfigError("timestep count must be at least 1");
    }
    if (n < 2) {
        throw InvalidConfigError("segment length must be at least 2");
    }
    if (k >= n) {
        throw InvalidConfigError("overlap " + std::to_string(k) +
                                 " must be smaller than segment length " +
                                 std::to_string(n));
    }
    if (!std::isfinite(cfg_scale)) {
        throw InvalidConfigError("guidance scale must be finite");
    }
    if (anchor_frames < 1) {
        throw InvalidConfigError("anchor must cover at least one frame");
    }
}

namespace {

// Z_tar = Z_src + (Z_edit - X_src). The grouping matters: when Z_edit still
// equals X_src bitwise, the bracket is exactly zero and the target trajectory
// coincides with the source one.
LatentSequence compose_target(const LatentSequence& z_edit,
                              const LatentSequence& z_src,
                              const LatentSequence& x_src) {
    LatentSequence out(z_src.frames(), z_src.channels());
    auto e = z_edit.flat();
    auto s = z_src.flat();
    auto x = x_src.flat();
    auto o = out.flat();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = s[i] + (e[i] - x[i]);
    }
    return out;
}

LatentSequence subtract(const LatentSequence& a, const LatentSequence& b) {
    LatentSequence out(a.frames(), a.channels());
    auto av = a.flat();
    auto bv = b.flat();
    auto o = out.flat();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = av[i] - bv[i];
    return out;
}

LatentSequence guided_velocity(const VelocityModel& model, const LatentSequence& z,
                               double t, const PromptEmbedding& p,
                               const PromptEmbedding& p_uncond, double w,
                               const SinkContext& cond_sink,
                               const SinkContext& uncond_sink, std::size_t s) {
    LatentSequence v_cond = eval_velocity(model, z, t, p, cond_sink, s);
    if (w == 1.0) return v_cond; // no unconditional evaluation needed
    LatentSequence v_uncond = eval_velocity(model, z, t, p_uncond, uncond_sink, s);
    return apply_cfg(v_cond, v_uncond, w);
}

// One anchor cache per (branch, guidance) stream so a conditional inject
// always reads what a conditional capture wrote.
struct CacheBank {
    std::vector<AnchorCache> tar_cond;
    std::vector<AnchorCache> tar_uncond;
    std::vector<AnchorCache> src_cond;
    std::vector<AnchorCache> src_uncond;
};

CacheBank make_cache_bank(SinkPolicy policy, std::size_t m, bool sink_on_source) {
    // FirstOfInitial uses one slot shared by all segments; FirstOfPrevious
    // uses slot s for the anchor consumed by segment s (slot 0 stays empty).
    std::size_t slots = 0;
    if (policy == SinkPolicy::FirstOfInitial) slots = 1;
    if (policy == SinkPolicy::FirstOfPrevious) slots = m;
    CacheBank bank;
    bank.tar_cond.resize(slots);
    bank.tar_uncond.resize(slots);
    if (sink_on_source) {
        bank.src_cond.resize(slots);
        bank.src_uncond.resize(slots);
    }
    return bank;
}

SinkContext context_for(SinkPolicy policy, std::vector<AnchorCache>& caches,
                        std::size_t s, std::size_t m, std::size_t step,
                        std::size_t anchor_tokens) {
    SinkContext ctx;
    ctx.timestep_index = step;
    ctx.anchor_token_count = anchor_tokens;
    switch (policy) {
    case SinkPolicy::None:
        break;
    case SinkPolicy::FirstOfInitial:
        if (s == 0) {
            ctx.mode = SinkContext::Mode::Capture;
            ctx.capture_cache = &caches[0];
            ctx.capture_source = 0;
        } else {
            ctx.mode = SinkContext::Mode::Inject;
            ctx.inject_cache = &caches[0];
        }
        break;
    case SinkPolicy::FirstOfPrevious:
        if (s == 0) {
            if (m > 1) {
                ctx.mode = SinkContext::Mode::Capture;
                ctx.capture_cache = &caches[1];
                ctx.capture_source = 0;
            }
        } else if (s + 1 < m) {
            ctx.mode = SinkContext::Mode::CaptureInject;
            ctx.inject_cache = &caches[s];
            ctx.capture_cache = &caches[s + 1];
            ctx.capture_source = s;
        } else {
            ctx.mode = SinkContext::Mode::Inject;
            ctx.inject_cache = &caches[s];
        }
        break;
    }
    return ctx;
}

double l2_norm(const LatentSequence& z) {
    double acc = 0.0;
    for (double v : z.flat()) acc += v * v;
    return std::sqrt(acc);
}

// Normalized triangular overlap-add of the per-segment tensors. Frames with
// a single owner take that segment's value unchanged; shared frames take the
// window-weighted average, which for two owners is exactly the pairwise
// blend formula.
LatentSequence overlap_add(const std::vector<LatentSequence>& dv,
                           const SegmentPlan& plan) {
    const std::size_t F = plan.total_frames;
    const std::size_t C = dv.front().channels();
    LatentSequence acc(F, C, 0.0);
    std::vector<double> wsum(F, 0.0);
    std::vector<std::size_t> owners(F, 0);
    for (const SegmentSpan& span : plan.spans) {
        const LatentSequence& d = dv[span.index];
        for (std::size_t local = 0; local < span.length(); ++local) {
            const std::size_t g = span.start + local;
            const double w = window_weight(local, span.length());
            auto src = d.frame(local);
            auto dst = acc.frame(g);
            for (std::size_t c = 0; c < C; ++c) dst[c] += w * src[c];
            wsum[g] += w;
            owners[g] += 1;
        }
    }
    LatentSequence out(F, C);
    for (const SegmentSpan& span : plan.spans) {
        const LatentSequence& d = dv[span.index];
        for (std::size_t local = 0; local < span.length(); ++local) {
            const std::size_t g = span.start + local;
            if (owners[g] == 1) {
                auto src = d.frame(local);
                auto dst = out.frame(g);
                for (std::size_t c = 0; c < C; ++c) dst[c] = src[c];
            }
        }
    }
    for (std::size_t g = 0; g < F; ++g) {
        if (owners[g] == 0) {
            throw ProtocolError("segment plan leaves frame " + std::to_string(g) +
                                " uncovered");
        }
        if (owners[g] == 1) continue;
        auto a = acc.frame(g);
        auto o = out.frame(g);
        for (std::size_t c = 0; c < C; ++c) o[c] = a[c] / wsum[g];
    }
    return out;
}

EditState segmented_step(EditState state, const LatentSequence& x_src,
                         const PromptEmbedding& p_src, const PromptEmbedding& p_tar,
                         const VelocityModel& model, const EditConfig& config,
                         bool blend_enabled, SinkPolicy policy,
                         std::vector<BoundaryTraceRow>* trace, StepDiagnostics* diag) {
    if (state.step >= state.schedule.steps) {
        throw OutOfRangeError("edit state already integrated to t = 0");
    }
    if (!state.z_edit.same_shape(x_src) ||
        state.plan.total_frames != x_src.frames()) {
        throw InvalidShapeError("edit state does not match the source latent");
    }
    const std::size_t F = x_src.frames();
    const std::size_t C = x_src.channels();
    const std::size_t m = state.plan.segment_count();
    const std::size_t step = state.step;
    const double t_i = state.schedule.times[step];
    const double t_prev = state.schedule.times[step + 1];

    LatentSequence noise =
        sample_noise(SeedSpec{config.root_seed, "noise", step}, F, C);
    LatentSequence z_src_full = lerp_source(x_src, noise, t_i);
    LatentSequence z_tar_full = compose_target(state.z_edit, z_src_full, x_src);

    CacheBank bank = make_cache_bank(policy, m, config.sink_on_source);
    const PromptEmbedding p_uncond = PromptEmbedding::zeros(model.prompt_dim());
    const double w = config.cfg_scale;

    std::vector<LatentSequence> dv;
    dv.reserve(m);
    for (const SegmentSpan& span : state.plan.spans) {
        const std::size_t s = span.index;
        LatentSequence z_tar_s = z_tar_full.slice_frames(span.start, span.end);
        LatentSequence z_src_s = z_src_full.slice_frames(span.start, span.end);

        const std::size_t anchor_tokens = config.anchor_frames;
        SinkContext tar_cond =
            context_for(policy, bank.tar_cond, s, m, step, anchor_tokens);
        SinkContext tar_uncond =
            context_for(policy, bank.tar_uncond, s, m, step, anchor_tokens);
        SinkContext src_cond = SinkContext::off();
        SinkContext src_uncond = SinkContext::off();
        if (config.sink_on_source && policy != SinkPolicy::None) {
            src_cond = context_for(policy, bank.src_cond, s, m, step, anchor_tokens);
            src_uncond =
                context_for(policy, bank.src_uncond, s, m, step, anchor_tokens);
        }

        LatentSequence v_tar = guided_velocity(model, z_tar_s, t_i, p_tar, p_uncond,
                                               w, tar_cond, tar_uncond, s);
        LatentSequence v_src = guided_velocity(model, z_src_s, t_i, p_src, p_uncond,
                                               w, src_cond, src_uncond, s);
        LatentSequence d = subtract(v_tar, v_src);
        if (!d.all_finite()) {
            throw NumericDomainError("non-finite velocity difference at timestep " +
                                     std::to_string(step) + ", segment " +
                                     std::to_string(s));
        }
        dv.push_back(std::move(d));
    }

    // Splice buffer: later segments overwrite the overlap.
    LatentSequence naive_buf(F, C);
    for (const SegmentSpan& span : state.plan.spans) {
        const LatentSequence& d = dv[span.index];
        for (std::size_t local = 0; local < span.length(); ++local) {
            auto src = d.frame(local);
            auto dst = naive_buf.frame(span.start + local);
            for (std::size_t c = 0; c < C; ++c) dst[c] = src[c];
        }
    }

    const bool do_blend = blend_enabled && m > 1;
    LatentSequence used_buf = do_blend ? overlap_add(dv, state.plan) : naive_buf;

    if (trace != nullptr) {
        for (std::size_t b = 1; b < m; ++b) {
            FrameRange ov = overlap_of(state.plan, b);
            double pre = 0.0;
            double post = 0.0;
            for (std::size_t g = ov.start; g <= ov.end; ++g) {
                pre = std::max(pre, adjacent_frame_jump(naive_buf, g));
                post = std::max(post, adjacent_frame_jump(used_buf, g));
            }
            trace->push_back({step, t_i, b, pre, post, l2_norm(dv[b - 1]),
                              l2_norm(dv[b])});
        }
    }

    const double width = t_prev - t_i;
    std::vector<std::size_t> writes(F, 0);
    for (std::size_t g = 0; g < F; ++g) {
        auto z_row = state.z_edit.frame(g);
        auto d_row = used_buf.frame(g);
        for (std::size_t c = 0; c < C; ++c) {
            z_row[c] = z_row[c] + width * d_row[c];
        }
        writes[g] += 1;
    }
    for (std::size_t g = 0; g < F; ++g) {
        if (writes[g] != 1) {
            throw ProtocolError("frame " + std::to_string(g) + " updated " +
                                std::to_string(writes[g]) + " times in one step");
        }
    }
    if (diag != nullptr) {
        diag->write_counts = std::move(writes);
    }

    state.step += 1;
    return state;
}

} // namespace

EditState make_edit_state(const LatentSequence& x_src, const EditConfig& config) {
    config.validate();
    if (!x_src.all_finite()) {
        throw NumericDomainError("source latent contains a non-finite value");
    }
    EditState st;
    st.z_edit = x_src;
    st.schedule = make_schedule(config.T);
    st.plan = plan_segments(x_src.frames(), config.n, config.k);
    return st;
}

LatentSequence wan_edit_step(const LatentSequence& z_edit, const LatentSequence& x_src,
                             double t_i, double t_prev, const PromptEmbedding& p_src,
                             const PromptEmbedding& p_tar, const VelocityModel& model,
                             double w, std::uint64_t root_seed,
                             std::size_t timestep_index) {
    if (!z_edit.same_shape(x_src)) {
        throw InvalidShapeError("edit latent does not match the source latent");
    }
    if (t_prev == t_i) return z_edit; // zero-width step
    if (t_prev > t_i) {
        throw OutOfRangeError("time must decrease across a step");
    }
    LatentSequence noise =
        sample_noise(SeedSpec{root_seed, "noise", timestep_index},
                     x_src.frames(), x_src.channels());
    LatentSequence z_src = lerp_source(x_src, noise, t_i);
    LatentSequence z_tar = compose_target(z_edit, z_src, x_src);
    const PromptEmbedding p_uncond = PromptEmbedding::zeros(model.prompt_dim());
    const SinkContext off = SinkContext::off();
    LatentSequence v_tar =
        guided_velocity(model, z_tar, t_i, p_tar, p_uncond, w, off, off, 0);
    LatentSequence v_src =
        guided_velocity(model, z_src, t_i, p_src, p_uncond, w, off, off, 0);
    LatentSequence dv = subtract(v_tar, v_src);
    if (!dv.all_finite()) {
        throw NumericDomainError("non-finite velocity difference at timestep " +
                                 std::to_string(timestep_index) +
                                 " (whole sequence)");
    }
    const double width = t_prev - t_i;
    LatentSequence out = z_edit;
    auto o = out.flat();
    auto d = dv.flat();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = o[i] + width * d[i];
    }
    return out;
}

EditState mlv_edit_step(EditState state, const LatentSequence& x_src,
                        const PromptEmbedding& p_src, const PromptEmbedding& p_tar,
                        const VelocityModel& model, const EditConfig& config,
                        std::vector<BoundaryTraceRow>* trace, StepDiagnostics* diag) {
    return segmented_step(std::move(state), x_src, p_src, p_tar, model, config,
                          config.blend_enabled, config.sink_policy, trace, diag);
}

EditState naive_stitch_step(EditState state, const LatentSequence& x_src,
                            const PromptEmbedding& p_src, const PromptEmbedding& p_tar,
                            const VelocityModel& model, const EditConfig& config,
                            std::vector<BoundaryTraceRow>* trace,
                            StepDiagnostics* diag) {
    return segmented_step(std::move(state), x_src, p_src, p_tar, model, config,
                          /*blend_enabled=*/false, SinkPolicy::None, trace, diag);
}

EditResult run_edit(const LatentSequence& x_src, const PromptEmbedding& p_src,
                    const PromptEmbedding& p_tar, const VelocityModel& model,
                    const EditConfig& config, EditMode mode, bool want_trace) {
    EditState state = make_edit_state(x_src, config);
    EditResult result;
    result.plan = state.plan;
    std::vector<BoundaryTraceRow>* trace = want_trace ? &result.trace : nullptr;
    for (std::size_t step = 0; step < config.T; ++step) {
        switch (mode) {
        case EditMode::Wan:
            state.z_edit = wan_edit_step(state.z_edit, x_src,
                                         state.schedule.times[step],
                                         state.schedule.times[step + 1], p_src,
                                         p_tar, model, config.cfg_scale,
                                         config.root_seed, step);
            state.step += 1;
            break;
        case EditMode::Mlv:
            state = mlv_edit_step(std::move(state), x_src, p_src, p_tar, model,
                                  config, trace, nullptr);
            break;
        case EditMode::Naive:
            state = naive_stitch_step(std::move(state), x_src, p_src, p_tar, model,
                                      config, trace, nullptr);
            break;
        }
    }
    result.latent = std::move(state.z_edit);
    return result;
}

} // namespace mlv
