#pragma once

#include <cstddef>
#include <vector>

#include "mlvedit/errors.hpp"

namespace mlv {

// Linear denoising grid. times[0] = 1.0 down to times[T] = 0.0; the engine
// walks adjacent pairs (times[s], times[s+1]).
struct TimestepSchedule {
    std::size_t steps = 0;
    std::vector<double> times;
};

TimestepSchedule make_schedule(std::size_t T);

} // namespace mlv
