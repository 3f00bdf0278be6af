#pragma once

#include <cstdint>
#include <string_view>

#include "mlvedit/tensor.hpp"

namespace mlv {

// splitmix64 finalizer. Stateless: every draw is a pure function of
// (stream key, counter), so any value can be regenerated out of order.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t fnv1a64(std::string_view s);

// Names a deterministic stream: a root seed, a purpose label ("noise",
// "fixture", ...) and an index within that purpose (timestep, segment, ...).
struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::string_view purpose;
    std::uint64_t index = 0;

    std::uint64_t stream_key() const;
};

// Uniform on (0, 1]. Never returns 0, so log() in Box-Muller stays finite.
double uniform01(std::uint64_t key, std::uint64_t counter);

// Standard normal via Box-Muller; draws consume counters in pairs.
double normal(std::uint64_t key, std::uint64_t counter);

void fill_normal(std::uint64_t key, std::span<double> out);

// F x C standard-normal latent from the named stream.
LatentSequence sample_noise(const SeedSpec& spec, std::size_t frames,
                            std::size_t channels);

} // namespace mlv
