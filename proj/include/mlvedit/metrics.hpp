#pragma once

#include <cstdint>
#include <vector>

#include "mlvedit/segment.hpp"
#include "mlvedit/tensor.hpp"

namespace mlv {

// Mean over channels of the squared difference between frames g-1 and g.
double adjacent_frame_jump(const LatentSequence& z, std::size_t g);

// Seam roughness of a finished latent. A boundary sits at the first frame of
// each span s >= 1 (the frame where a splice hands ownership to the later
// segment); every other adjacent pair counts as interior.
struct BoundaryJumpReport {
    std::vector<double> per_boundary;
    double boundary_mean = 0.0; // 0 when the plan has a single segment
    double interior_mean = 0.0;
};

BoundaryJumpReport boundary_jump(const LatentSequence& z, const SegmentPlan& plan);

// Cross-segment feature agreement: cosine similarity between the center
// frames of consecutive segments. `features` holds one row per frame.
struct FrameSkipReport {
    std::vector<double> per_pair;
    double mean = 1.0; // vacuous 1.0 when the plan has a single segment
};

FrameSkipReport frame_skip_similarity(const Matrix& features, const SegmentPlan& plan);

// One latent channel over time, plus an 8-bit strip for visual inspection.
// All-equal rows map to mid-gray 128.
struct TemporalSlice {
    std::vector<double> values;
    std::vector<std::uint8_t> pixels;
};

TemporalSlice temporal_slice(const LatentSequence& z, std::size_t channel);

} // namespace mlv
