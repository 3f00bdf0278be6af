#include "mlvedit/toy_transformer.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <utility>

namespace mlv {

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'L', 'V', 'T', 'T', 'P', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

void check_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                 const char* name) {
    if (m.rows != rows || m.cols != cols) {
        throw InvalidShapeError(std::string(name) + " must be " +
                                std::to_string(rows) + "x" + std::to_string(cols) +
                                ", got " + std::to_string(m.rows) + "x" +
                                std::to_string(m.cols));
    }
    if (!m.all_finite()) {
        throw NumericDomainError(std::string(name) + " contains a non-finite value");
    }
}

Matrix init_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                   std::string_view name, std::uint64_t layer_index) {
    Matrix m(rows, cols);
    fill_normal(SeedSpec{seed, name, layer_index}.stream_key(),
                {m.data.data(), m.data.size()});
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (double& v : m.data) v *= scale;
    return m;
}

// Declaration order shared by the serializer and the loader.
template <typename P, typename Fn>
void for_each_matrix(P& p, Fn&& fn) {
    const std::size_t d = p.model_dim;
    fn(p.w_in, d, p.channels + p.prompt_dim + 1);
    for (auto& l : p.layer) {
        fn(l.w_q, d, d);
        fn(l.w_k, d, d);
        fn(l.w_v, d, d);
        fn(l.w_o, d, d);
        fn(l.w1, 4 * d, d);
        fn(l.w2, d, 4 * d);
    }
    fn(p.w_out, p.channels, d);
}

} // namespace

void ToyTransformerParams::validate() const {
    if (channels == 0 || prompt_dim == 0 || model_dim == 0 || layers == 0) {
        throw InvalidConfigError("toy transformer dims must all be positive");
    }
    if (layer.size() != layers) {
        throw InvalidShapeError("toy transformer has " + std::to_string(layer.size()) +
                                " layer blocks, header says " + std::to_string(layers));
    }
    const std::size_t d = model_dim;
    check_shape(w_in, d, channels + prompt_dim + 1, "w_in");
    for (const auto& l : layer) {
        check_shape(l.w_q, d, d, "w_q");
        check_shape(l.w_k, d, d, "w_k");
        check_shape(l.w_v, d, d, "w_v");
        check_shape(l.w_o, d, d, "w_o");
        check_shape(l.w1, 4 * d, d, "w1");
        check_shape(l.w2, d, 4 * d, "w2");
    }
    check_shape(w_out, channels, d, "w_out");
}

ToyTransformerParams init_toy_params(std::size_t channels, std::size_t prompt_dim,
                                     std::size_t model_dim, std::size_t layers,
                                     std::uint64_t seed) {
    ToyTransformerParams p;
    p.channels = channels;
    p.prompt_dim = prompt_dim;
    p.model_dim = model_dim;
    p.layers = layers;
    p.layer.resize(layers);
    p.init_seed = seed;
    const std::size_t d = model_dim;
    p.w_in = init_matrix(d, channels + prompt_dim + 1, seed, "toy.w_in", 0);
    for (std::size_t l = 0; l < layers; ++l) {
        auto& lp = p.layer[l];
        lp.w_q = init_matrix(d, d, seed, "toy.w_q", l);
        lp.w_k = init_matrix(d, d, seed, "toy.w_k", l);
        lp.w_v = init_matrix(d, d, seed, "toy.w_v", l);
        lp.w_o = init_matrix(d, d, seed, "toy.w_o", l);
        lp.w1 = init_matrix(4 * d, d, seed, "toy.w1", l);
        lp.w2 = init_matrix(d, 4 * d, seed, "toy.w2", l);
    }
    p.w_out = init_matrix(channels, d, seed, "toy.w_out", 0);
    p.validate();
    return p;
}

void save_toy_params(const std::filesystem::path& path,
                     const ToyTransformerParams& params) {
    params.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(kMagic.data(), kMagic.size());
    const std::uint32_t header[4] = {
        static_cast<std::uint32_t>(params.channels),
        static_cast<std::uint32_t>(params.prompt_dim),
        static_cast<std::uint32_t>(params.model_dim),
        static_cast<std::uint32_t>(params.layers),
    };
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    out.write(reinterpret_cast<const char*>(&params.init_seed),
              sizeof params.init_seed);
    for_each_matrix(params, [&](const Matrix& m, std::size_t, std::size_t) {
        out.write(reinterpret_cast<const char*>(m.data.data()),
                  static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    });
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

ToyTransformerParams load_toy_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) {
        throw ParseError(path.string() + ": bad magic, not a toy-transformer file");
    }
    std::uint32_t header[4] = {};
    in.read(reinterpret_cast<char*>(header), sizeof header);
    std::uint64_t init_seed = 0;
    in.read(reinterpret_cast<char*>(&init_seed), sizeof init_seed);
    if (!in) {
        throw ParseError(path.string() + ": truncated header");
    }
    ToyTransformerParams p;
    p.channels = header[0];
    p.prompt_dim = header[1];
    p.model_dim = header[2];
    p.layers = header[3];
    if (p.channels == 0 || p.prompt_dim == 0 || p.model_dim == 0 || p.layers == 0) {
        throw ParseError(path.string() + ": zero dimension in header");
    }
    p.layer.resize(p.layers);
    p.init_seed = init_seed;
    for_each_matrix(p, [&](Matrix& m, std::size_t rows, std::size_t cols) {
        m = Matrix(rows, cols);
        in.read(reinterpret_cast<char*>(m.data.data()),
                static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    });
    if (!in || in.peek() != std::ifstream::traits_type::eof()) {
        throw ParseError(path.string() + ": payload size does not match header");
    }
    p.validate();
    return p;
}

ToyTransformer::ToyTransformer(ToyTransformerParams params, double jitter_magnitude,
                               std::uint64_t jitter_seed)
    : params_(std::move(params)),
      jitter_magnitude_(jitter_magnitude),
      jitter_seed_(jitter_seed) {
    params_.validate();
    if (!std::isfinite(jitter_magnitude_)) {
        throw NumericDomainError("jitter magnitude is non-finite");
    }
}

LatentSequence ToyTransformer::eval(const LatentSequence& z, double t,
                                    const PromptEmbedding& p, const SinkContext& sink,
                                    std::size_t segment_ordinal) const {
    return eval_with_features(z, t, p, sink, segment_ordinal, nullptr);
}

LatentSequence ToyTransformer::eval_with_features(const LatentSequence& z, double t,
                                                  const PromptEmbedding& p,
                                                  const SinkContext& sink,
                                                  std::size_t segment_ordinal,
                                                  Matrix* features) const {
    const std::size_t L = z.frames();
    const std::size_t C = params_.channels;
    const std::size_t D = params_.prompt_dim;
    const std::size_t d = params_.model_dim;

    // Token embedding: [latent channels ∥ prompt ∥ t] through w_in.
    Matrix embed(L, C + D + 1);
    for (std::size_t f = 0; f < L; ++f) {
        auto row = embed.row(f);
        auto frame = z.frame(f);
        for (std::size_t c = 0; c < C; ++c) row[c] = frame[c];
        for (std::size_t j = 0; j < D; ++j) row[C + j] = p.values[j];
        row[C + D] = t;
    }
    Matrix x = matmul_nt(embed, params_.w_in); // L x d

    if (jitter_magnitude_ != 0.0) {
        // Per-segment drift source: one fixed d-vector added to every token.
        std::vector<double> delta(d);
        fill_normal(SeedSpec{jitter_seed_, "embed_jitter", segment_ordinal}.stream_key(),
                    delta);
        for (std::size_t f = 0; f < L; ++f) {
            auto row = x.row(f);
            for (std::size_t j = 0; j < d; ++j) row[j] += jitter_magnitude_ * delta[j];
        }
    }

    for (std::size_t l = 0; l < params_.layers; ++l) {
        const auto& lp = params_.layer[l];
        Matrix q = matmul_nt(x, lp.w_q);
        Matrix k = matmul_nt(x, lp.w_k);
        Matrix v = matmul_nt(x, lp.w_v);
        if (sink.captures()) {
            capture_anchor(*sink.capture_cache, sink.timestep_index, l, k, v,
                           sink.anchor_token_count);
        }
        Matrix attn = sink.injects()
                          ? attend_with_sink(q, k, v, *sink.inject_cache,
                                             sink.timestep_index, l)
                          : attention(q, k, v);
        Matrix attn_out = matmul_nt(attn, lp.w_o);
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += attn_out.data[i];

        Matrix h = matmul_nt(x, lp.w1); // L x 4d
        for (double& hv : h.data) hv = std::tanh(hv);
        Matrix mlp_out = matmul_nt(h, lp.w2); // L x d
        for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += mlp_out.data[i];
    }

    if (features != nullptr) {
        *features = x;
    }
    Matrix out = matmul_nt(x, params_.w_out); // L x C
    return LatentSequence::from_data(L, C, std::move(out.data));
}

Matrix segment_features(const ToyTransformer& model, const LatentSequence& z,
                        const SegmentPlan& plan, double t, const PromptEmbedding& p) {
    if (plan.total_frames != z.frames()) {
        throw InvalidShapeError("feature plan covers " +
                                std::to_string(plan.total_frames) +
                                " frames, latent has " + std::to_string(z.frames()));
    }
    Matrix table(z.frames(), model.params().model_dim);
    for (const SegmentSpan& span : plan.spans) {
        LatentSequence slice = z.slice_frames(span.start, span.end);
        Matrix feats;
        model.eval_with_features(slice, t, p, SinkContext::off(), span.index, &feats);
        for (std::size_t local = 0; local < span.length(); ++local) {
            auto src = feats.row(local);
            auto dst = table.row(span.start + local);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    return table;
}

} // namespace mlv
