#pragma once

#include <cstddef>

#include "mlvedit/tensor.hpp"

namespace mlv {

// Symmetric triangular window over a length-n segment, strictly positive:
// W(tau) = 1 - |1 - 2(tau + 0.5)/n|. Peaks at the center frame(s).
double window_weight(std::size_t tau, std::size_t n);

// Fuses the tail of dv_prev with the head of dv_curr over a k-frame overlap.
// Row j of the result is the W-weighted average of dv_prev frame n-k+j and
// dv_curr frame j, normalized so the weights sum to 1.
LatentSequence blend_overlap(const LatentSequence& dv_prev,
                             const LatentSequence& dv_curr,
                             std::size_t n, std::size_t k);

} // namespace mlv
