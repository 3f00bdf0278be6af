#include "mlvedit/schedule.hpp"

namespace mlv {

TimestepSchedule make_schedule(std::size_t T) {
    if (T == 0) {
        throw InvalidConfigError("schedule needs at least one step");
    }
    TimestepSchedule sched;
    sched.steps = T;
    sched.times.resize(T + 1);
    for (std::size_t j = 0; j <= T; ++j) {
        // (T - j) / T hits 1.0 and 0.0 exactly at the ends.
        sched.times[j] = static_cast<double>(T - j) / static_cast<double>(T);
    }
    return sched;
}

} // namespace mlv
