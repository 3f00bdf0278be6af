#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mlvedit/errors.hpp"

namespace mlv {

// Dense F x C row-major scalar container. The single value type shared by
// source latents, noises, velocities and velocity differences.
class LatentSequence {
public:
    LatentSequence() = default;
    LatentSequence(std::size_t frames, std::size_t channels, double fill = 0.0);

    // Takes ownership of `data`; validates size and finiteness.
    static LatentSequence from_data(std::size_t frames, std::size_t channels,
                                    std::vector<double> data);

    std::size_t frames() const { return frames_; }
    std::size_t channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool same_shape(const LatentSequence& other) const {
        return frames_ == other.frames_ && channels_ == other.channels_;
    }

    double& at(std::size_t frame, std::size_t channel) {
        return data_[frame * channels_ + channel];
    }
    double at(std::size_t frame, std::size_t channel) const {
        return data_[frame * channels_ + channel];
    }

    std::span<double> frame(std::size_t f) {
        return {data_.data() + f * channels_, channels_};
    }
    std::span<const double> frame(std::size_t f) const {
        return {data_.data() + f * channels_, channels_};
    }

    std::span<double> flat() { return {data_.data(), data_.size()}; }
    std::span<const double> flat() const { return {data_.data(), data_.size()}; }
    const std::vector<double>& data() const { return data_; }

    // Copies frames [start, end) into a new sequence.
    LatentSequence slice_frames(std::size_t start, std::size_t end) const;

    bool all_finite() const;

    bool operator==(const LatentSequence& other) const {
        return frames_ == other.frames_ && channels_ == other.channels_ &&
               data_ == other.data_;
    }

private:
    std::size_t frames_ = 0;
    std::size_t channels_ = 0;
    std::vector<double> data_;
};

// (1 - t) * x_src + t * noise, elementwise. Exact at both endpoints.
LatentSequence lerp_source(const LatentSequence& x_src, const LatentSequence& noise,
                           double t);

// Minimal row-major matrix for attention and the toy backbone.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    bool all_finite() const;

    bool operator==(const Matrix& other) const {
        return rows == other.rows && cols == other.cols && data == other.data;
    }
};

Matrix matmul(const Matrix& a, const Matrix& b);    // a (r x k) * b (k x c)
Matrix matmul_nt(const Matrix& a, const Matrix& b); // a (r x k) * b^T (c x k)

// Row softmax with max-subtraction. Rejects non-finite input.
Matrix softmax_rows(const Matrix& m);

} // namespace mlv
