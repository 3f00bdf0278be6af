#include "mlvedit/latent_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace mlv {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'L', 'V', 'L', 'A', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");
static_assert(std::numeric_limits<double>::is_iec559);

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void write_latent(const std::filesystem::path& path, const LatentSequence& latent) {
    if (latent.empty()) {
        throw InvalidShapeError("refusing to write an empty latent");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(latent.frames()));
    put_u32(out, static_cast<std::uint32_t>(latent.channels()));
    auto flat = latent.flat();
    out.write(reinterpret_cast<const char*>(flat.data()),
              static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

LatentSequence read_latent(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) {
        throw ParseError(path.string() + ": bad magic, not an MLV1 latent file");
    }
    const std::uint32_t frames = get_u32(in);
    const std::uint32_t channels = get_u32(in);
    if (!in) {
        throw ParseError(path.string() + ": truncated header");
    }
    if (frames == 0 || channels == 0) {
        throw ParseError(path.string() + ": zero-sized latent in header");
    }
    std::vector<double> data(static_cast<std::size_t>(frames) * channels);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double))) {
        throw ParseError(path.string() + ": truncated payload");
    }
    return LatentSequence::from_data(frames, channels, std::move(data));
}

} // namespace mlv
