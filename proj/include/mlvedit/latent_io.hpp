#pragma once

#include <filesystem>

#include "mlvedit/tensor.hpp"

namespace mlv {

// Latent tensor container: 8-byte magic "MLVLAT01", little-endian u32 frame
// count, u32 channel count, then frames*channels little-endian doubles in
// row-major order.
void write_latent(const std::filesystem::path& path, const LatentSequence& latent);
LatentSequence read_latent(const std::filesystem::path& path);

} // namespace mlv
