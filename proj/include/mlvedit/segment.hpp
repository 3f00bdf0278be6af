#pragma once

#include <cstddef>
#include <vector>

#include "mlvedit/errors.hpp"

namespace mlv {

struct SegmentSpan {
    std::size_t index = 0; // segment ordinal s
    std::size_t start = 0; // global frame, inclusive
    std::size_t end = 0;   // global frame, exclusive

    std::size_t length() const { return end - start; }
    bool contains(std::size_t frame) const { return frame >= start && frame < end; }
};

struct FrameRange {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
};

struct SegmentPlan {
    std::vector<SegmentSpan> spans;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t total_frames = 0;

    std::size_t segment_count() const { return spans.size(); }
};

// Fixed-stride decomposition of [0, F) into length-min(n, F) windows; the
// last window is pulled back to end exactly at F, so its overlap with the
// previous one can exceed k.
SegmentPlan plan_segments(std::size_t F, std::size_t n, std::size_t k);

// Intersection of spans s-1 and s, s >= 1.
FrameRange overlap_of(const SegmentPlan& plan, std::size_t s);

} // namespace mlv
