#include "mlvedit/tensor.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace mlv {

LatentSequence::LatentSequence(std::size_t frames, std::size_t channels, double fill) {
    if (frames == 0 || channels == 0) {
        throw InvalidShapeError("latent shape must be positive, got " +
                                std::to_string(frames) + "x" + std::to_string(channels));
    }
    frames_ = frames;
    channels_ = channels;
    data_.assign(frames * channels, fill);
}

LatentSequence LatentSequence::from_data(std::size_t frames, std::size_t channels,
                                         std::vector<double> data) {
    if (frames == 0 || channels == 0) {
        throw InvalidShapeError("latent shape must be positive, got " +
                                std::to_string(frames) + "x" + std::to_string(channels));
    }
    if (data.size() != frames * channels) {
        throw InvalidShapeError("latent data has " + std::to_string(data.size()) +
                                " values, expected " + std::to_string(frames * channels));
    }
    LatentSequence out;
    out.frames_ = frames;
    out.channels_ = channels;
    out.data_ = std::move(data);
    if (!out.all_finite()) {
        throw NumericDomainError("latent data contains a non-finite value");
    }
    return out;
}

LatentSequence LatentSequence::slice_frames(std::size_t start, std::size_t end) const {
    if (start >= end || end > frames_) {
        throw OutOfRangeError("frame slice [" + std::to_string(start) + ", " +
                              std::to_string(end) + ") invalid for " +
                              std::to_string(frames_) + " frames");
    }
    LatentSequence out;
    out.frames_ = end - start;
    out.channels_ = channels_;
    out.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(start * channels_),
                     data_.begin() + static_cast<std::ptrdiff_t>(end * channels_));
    return out;
}

bool LatentSequence::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

LatentSequence lerp_source(const LatentSequence& x_src, const LatentSequence& noise,
                           double t) {
    if (!x_src.same_shape(noise)) {
        throw InvalidShapeError("lerp_source operands differ in shape");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw OutOfRangeError("lerp_source time " + std::to_string(t) +
                              " outside [0, 1]");
    }
    // Endpoints return bitwise copies of the inputs.
    if (t == 0.0) return x_src;
    if (t == 1.0) return noise;
    LatentSequence out(x_src.frames(), x_src.channels());
    const double one_minus_t = 1.0 - t;
    auto xs = x_src.flat();
    auto ns = noise.flat();
    auto os = out.flat();
    for (std::size_t i = 0; i < os.size(); ++i) {
        os[i] = one_minus_t * xs[i] + t * ns[i];
    }
    return out;
}

bool Matrix::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw InvalidShapeError("matmul inner dims disagree: " + std::to_string(a.cols) +
                                " vs " + std::to_string(b.rows));
    }
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) {
        throw InvalidShapeError("matmul_nt inner dims disagree: " +
                                std::to_string(a.cols) + " vs " + std::to_string(b.cols));
    }
    Matrix out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.rows; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) {
                acc += a.at(i, k) * b.at(j, k);
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

Matrix softmax_rows(const Matrix& m) {
    if (!m.all_finite()) {
        throw NumericDomainError("softmax input contains a non-finite value");
    }
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        auto in_row = m.row(i);
        auto out_row = out.row(i);
        double row_max = in_row[0];
        for (double v : in_row) row_max = std::max(row_max, v);
        double denom = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            out_row[j] = std::exp(in_row[j] - row_max);
            denom += out_row[j];
        }
        for (std::size_t j = 0; j < m.cols; ++j) {
            out_row[j] /= denom;
        }
    }
    return out;
}

} // namespace mlv
