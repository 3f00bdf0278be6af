#include "mlvedit/attention.hpp"

#include <cmath>
#include <string>

namespace mlv {

namespace {

// Core path shared by the plain and sink variants: K/V may carry extra
// leading rows, Q never does.
Matrix scaled_attention(const Matrix& Q, const Matrix& K, const Matrix& V) {
    if (Q.cols == 0 || Q.rows == 0) {
        throw InvalidShapeError("attention requires nonempty Q");
    }
    if (K.cols != Q.cols || V.cols != Q.cols || K.rows != V.rows || K.rows == 0) {
        throw InvalidShapeError("attention operands disagree: Q " +
                                std::to_string(Q.rows) + "x" + std::to_string(Q.cols) +
                                ", K " + std::to_string(K.rows) + "x" +
                                std::to_string(K.cols) + ", V " +
                                std::to_string(V.rows) + "x" + std::to_string(V.cols));
    }
    Matrix scores = matmul_nt(Q, K);
    const double scale = 1.0 / std::sqrt(static_cast<double>(Q.cols));
    for (double& v : scores.data) v *= scale;
    return matmul(softmax_rows(scores), V);
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows + bottom.rows, top.cols);
    std::copy(top.data.begin(), top.data.end(), out.data.begin());
    std::copy(bottom.data.begin(), bottom.data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(top.data.size()));
    return out;
}

} // namespace

Matrix attention(const Matrix& Q, const Matrix& K, const Matrix& V) {
    return scaled_attention(Q, K, V);
}

void AnchorCache::put(std::size_t timestep_index, std::size_t layer_index,
                      Matrix keys, Matrix values) {
    const auto key = std::make_pair(timestep_index, layer_index);
    if (entries_.contains(key)) {
        throw ProtocolError("anchor cache already holds an entry for timestep " +
                            std::to_string(timestep_index) + ", layer " +
                            std::to_string(layer_index));
    }
    entries_.emplace(key, Entry{std::move(keys), std::move(values)});
}

bool AnchorCache::has(std::size_t timestep_index, std::size_t layer_index) const {
    return entries_.contains({timestep_index, layer_index});
}

const AnchorCache::Entry& AnchorCache::get(std::size_t timestep_index,
                                           std::size_t layer_index) const {
    auto it = entries_.find({timestep_index, layer_index});
    if (it == entries_.end()) {
        throw ProtocolError("anchor missing for timestep " +
                            std::to_string(timestep_index) + ", layer " +
                            std::to_string(layer_index) +
                            " (inject before capture)");
    }
    return it->second;
}

void capture_anchor(AnchorCache& cache, std::size_t timestep_index,
                    std::size_t layer_index, const Matrix& K_seg,
                    const Matrix& V_seg, std::size_t anchor_token_count) {
    if (anchor_token_count == 0 || anchor_token_count > K_seg.rows) {
        throw InvalidConfigError("anchor token count " +
                                 std::to_string(anchor_token_count) +
                                 " must lie in [1, " + std::to_string(K_seg.rows) + "]");
    }
    if (!(K_seg.rows == V_seg.rows && K_seg.cols == V_seg.cols)) {
        throw InvalidShapeError("anchor K/V shapes disagree");
    }
    Matrix keys(anchor_token_count, K_seg.cols);
    Matrix values(anchor_token_count, V_seg.cols);
    std::copy(K_seg.data.begin(),
              K_seg.data.begin() +
                  static_cast<std::ptrdiff_t>(anchor_token_count * K_seg.cols),
              keys.data.begin());
    std::copy(V_seg.data.begin(),
              V_seg.data.begin() +
                  static_cast<std::ptrdiff_t>(anchor_token_count * V_seg.cols),
              values.data.begin());
    cache.put(timestep_index, layer_index, std::move(keys), std::move(values));
}

Matrix attend_with_sink(const Matrix& Q, const Matrix& K, const Matrix& V,
                        const AnchorCache& cache, std::size_t timestep_index,
                        std::size_t layer_index) {
    const AnchorCache::Entry& anchor = cache.get(timestep_index, layer_index);
    if (anchor.keys.cols != K.cols) {
        throw InvalidShapeError("anchor width " + std::to_string(anchor.keys.cols) +
                                " does not match key width " + std::to_string(K.cols));
    }
    return scaled_attention(Q, vstack(anchor.keys, K), vstack(anchor.values, V));
}

} // namespace mlv
