#include "mlvedit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mlv {

double adjacent_frame_jump(const LatentSequence& z, std::size_t g) {
    if (g == 0 || g >= z.frames()) {
        throw OutOfRangeError("frame pair (" + std::to_string(g) + "-1, " +
                              std::to_string(g) + ") outside the sequence");
    }
    auto prev = z.frame(g - 1);
    auto curr = z.frame(g);
    double acc = 0.0;
    for (std::size_t c = 0; c < z.channels(); ++c) {
        const double d = curr[c] - prev[c];
        acc += d * d;
    }
    return acc / static_cast<double>(z.channels());
}

BoundaryJumpReport boundary_jump(const LatentSequence& z, const SegmentPlan& plan) {
    if (plan.total_frames != z.frames()) {
        throw InvalidShapeError("plan covers " + std::to_string(plan.total_frames) +
                                " frames, latent has " + std::to_string(z.frames()));
    }
    std::vector<bool> is_boundary(z.frames(), false);
    BoundaryJumpReport report;
    for (std::size_t s = 1; s < plan.segment_count(); ++s) {
        const std::size_t g = plan.spans[s].start;
        is_boundary[g] = true;
        report.per_boundary.push_back(adjacent_frame_jump(z, g));
    }
    double boundary_acc = 0.0;
    for (double v : report.per_boundary) boundary_acc += v;
    report.boundary_mean =
        report.per_boundary.empty()
            ? 0.0
            : boundary_acc / static_cast<double>(report.per_boundary.size());

    double interior_acc = 0.0;
    std::size_t interior_count = 0;
    for (std::size_t g = 1; g < z.frames(); ++g) {
        if (is_boundary[g]) continue;
        interior_acc += adjacent_frame_jump(z, g);
        ++interior_count;
    }
    report.interior_mean =
        interior_count == 0 ? 0.0
                            : interior_acc / static_cast<double>(interior_count);
    return report;
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw NumericDomainError("cosine similarity of a zero feature vector");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

FrameSkipReport frame_skip_similarity(const Matrix& features, const SegmentPlan& plan) {
    if (features.rows != plan.total_frames) {
        throw InvalidShapeError("need one feature row per frame: got " +
                                std::to_string(features.rows) + " rows for " +
                                std::to_string(plan.total_frames) + " frames");
    }
    FrameSkipReport report;
    for (std::size_t s = 1; s < plan.segment_count(); ++s) {
        const SegmentSpan& prev = plan.spans[s - 1];
        const SegmentSpan& curr = plan.spans[s];
        const std::size_t g_prev = prev.start + prev.length() / 2;
        const std::size_t g_curr = curr.start + curr.length() / 2;
        report.per_pair.push_back(cosine(features.row(g_prev), features.row(g_curr)));
    }
    if (!report.per_pair.empty()) {
        double acc = 0.0;
        for (double v : report.per_pair) acc += v;
        report.mean = acc / static_cast<double>(report.per_pair.size());
    }
    return report;
}

TemporalSlice temporal_slice(const LatentSequence& z, std::size_t channel) {
    if (channel >= z.channels()) {
        throw OutOfRangeError("channel " + std::to_string(channel) +
                              " outside latent with " +
                              std::to_string(z.channels()) + " channels");
    }
    TemporalSlice slice;
    slice.values.resize(z.frames());
    for (std::size_t f = 0; f < z.frames(); ++f) {
        slice.values[f] = z.at(f, channel);
    }
    const auto [lo_it, hi_it] =
        std::minmax_element(slice.values.begin(), slice.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    slice.pixels.resize(z.frames());
    if (hi == lo) {
        std::fill(slice.pixels.begin(), slice.pixels.end(),
                  static_cast<std::uint8_t>(128));
    } else {
        for (std::size_t f = 0; f < z.frames(); ++f) {
            const double norm = (slice.values[f] - lo) / (hi - lo);
            slice.pixels[f] =
                static_cast<std::uint8_t>(std::lround(norm * 255.0));
        }
    }
    return slice;
}

} // namespace mlv
