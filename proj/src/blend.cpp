#include "mlvedit/blend.hpp"

#include <cmath>
#include <string>

namespace mlv {

double window_weight(std::size_t tau, std::size_t n) {
    if (n < 1) {
        throw InvalidConfigError("window length must be at least 1");
    }
    if (tau >= n) {
        throw OutOfRangeError("window index " + std::to_string(tau) +
                              " outside segment of length " + std::to_string(n));
    }
    const double x = (2.0 * static_cast<double>(tau) + 1.0) / static_cast<double>(n);
    return 1.0 - std::fabs(1.0 - x);
}

LatentSequence blend_overlap(const LatentSequence& dv_prev,
                             const LatentSequence& dv_curr,
                             std::size_t n, std::size_t k) {
    if (k == 0 || k >= n) {
        throw InvalidConfigError("overlap " + std::to_string(k) +
                                 " must lie in (0, " + std::to_string(n) + ")");
    }
    if (dv_prev.frames() != n || dv_curr.frames() != n ||
        !dv_prev.same_shape(dv_curr)) {
        throw InvalidShapeError("blend operands must both be " + std::to_string(n) +
                                "-frame sequences of equal channel count");
    }
    const std::size_t C = dv_prev.channels();
    LatentSequence out(k, C);
    for (std::size_t j = 0; j < k; ++j) {
        const double w_prev = window_weight(n - k + j, n);
        const double w_curr = window_weight(j, n);
        const double denom = w_prev + w_curr; // both strictly positive
        auto prev_row = dv_prev.frame(n - k + j);
        auto curr_row = dv_curr.frame(j);
        auto out_row = out.frame(j);
        for (std::size_t c = 0; c < C; ++c) {
            out_row[c] = (w_prev * prev_row[c] + w_curr * curr_row[c]) / denom;
        }
    }
    return out;
}

} // namespace mlv
