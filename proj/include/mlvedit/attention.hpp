#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>

#include "mlvedit/tensor.hpp"

namespace mlv {

// Scaled dot-product attention: Softmax(Q K^T / sqrt(d)) V. Rows of the
// result are convex combinations of V rows.
Matrix attention(const Matrix& Q, const Matrix& K, const Matrix& V);

// Where later segments take their prepended anchor rows from.
enum class SinkPolicy {
    None,           // plain attention everywhere
    FirstOfInitial, // anchor = first frame(s) of segment 0, reused by all
    FirstOfPrevious // anchor = first frame(s) of segment s-1
};

// Cached anchor K/V rows, keyed by (timestep_index, layer_index). Entries
// are write-once; a second write to the same key is a protocol error.
class AnchorCache {
public:
    struct Entry {
        Matrix keys;   // T_a x d
        Matrix values; // T_a x d
    };

    void put(std::size_t timestep_index, std::size_t layer_index, Matrix keys,
             Matrix values);
    bool has(std::size_t timestep_index, std::size_t layer_index) const;
    const Entry& get(std::size_t timestep_index, std::size_t layer_index) const;

    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<std::size_t, std::size_t>, Entry> entries_;
};

// Stores the first anchor_token_count rows of K_seg / V_seg under
// (timestep_index, layer_index).
void capture_anchor(AnchorCache& cache, std::size_t timestep_index,
                    std::size_t layer_index, const Matrix& K_seg,
                    const Matrix& V_seg, std::size_t anchor_token_count);

// attention(Q, [anchorK; K], [anchorV; V]): the cached rows extend keys and
// values only, so the output keeps Q's row count.
Matrix attend_with_sink(const Matrix& Q, const Matrix& K, const Matrix& V,
                        const AnchorCache& cache, std::size_t timestep_index,
                        std::size_t layer_index);

} // namespace mlv
