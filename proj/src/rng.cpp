#include "mlvedit/rng.hpp"

#include <cmath>
#include <numbers>

namespace mlv {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t SeedSpec::stream_key() const {
    std::uint64_t k = mix64(root_seed);
    k = mix64(k ^ fnv1a64(purpose));
    k = mix64(k ^ index);
    return k;
}

double uniform01(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t bits = mix64(key + counter * 0x9E3779B97F4A7C15ULL);
    // Top 53 bits, shifted into (0, 1].
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double normal(std::uint64_t key, std::uint64_t counter) {
    // Each pair of counters (2m, 2m+1) feeds one Box-Muller transform;
    // even counters take the cosine branch, odd the sine branch.
    const std::uint64_t base = counter & ~1ULL;
    const double u1 = uniform01(key, base);
    const double u2 = uniform01(key, base + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return (counter & 1ULL) ? r * std::sin(theta) : r * std::cos(theta);
}

void fill_normal(std::uint64_t key, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = normal(key, static_cast<std::uint64_t>(i));
    }
}

LatentSequence sample_noise(const SeedSpec& spec, std::size_t frames,
                            std::size_t channels) {
    LatentSequence out(frames, channels);
    fill_normal(spec.stream_key(), out.flat());
    return out;
}

} // namespace mlv
