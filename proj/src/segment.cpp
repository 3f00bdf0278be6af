#include "mlvedit/segment.hpp"

#include <string>

namespace mlv {

SegmentPlan plan_segments(std::size_t F, std::size_t n, std::size_t k) {
    if (F < 1) {
        throw InvalidConfigError("frame count must be at least 1");
    }
    if (n < 2) {
        throw InvalidConfigError("segment length must be at least 2, got " +
                                 std::to_string(n));
    }
    if (k >= n) {
        throw InvalidConfigError("overlap " + std::to_string(k) +
                                 " must be smaller than segment length " +
                                 std::to_string(n));
    }

    SegmentPlan plan;
    plan.n = n;
    plan.k = k;
    plan.total_frames = F;

    const std::size_t len = std::min(n, F);
    const std::size_t stride = n - k;
    std::size_t start = 0;
    std::size_t ordinal = 0;
    for (;;) {
        std::size_t end = start + len;
        if (end >= F) {
            // Final span: keep length `len`, end exactly at F.
            plan.spans.push_back({ordinal, F - len, F});
            break;
        }
        plan.spans.push_back({ordinal, start, end});
        start += stride;
        ++ordinal;
    }
    return plan;
}

FrameRange overlap_of(const SegmentPlan& plan, std::size_t s) {
    if (s == 0 || s >= plan.segment_count()) {
        throw OutOfRangeError("overlap ordinal " + std::to_string(s) +
                              " invalid for a plan of " +
                              std::to_string(plan.segment_count()) + " segments");
    }
    const SegmentSpan& prev = plan.spans[s - 1];
    const SegmentSpan& curr = plan.spans[s];
    return {curr.start, prev.end};
}

} // namespace mlv
