#include "ctis/hypercube.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ctis/error.hpp"

namespace ctis {
namespace {

std::size_t checked_volume(std::size_t rows, std::size_t cols, std::size_t bands) {
    if (rows == 0 || cols == 0 || bands == 0) {
        throw DimensionError("cube dims must be >= 1, got " + std::to_string(rows) + "x" + std::to_string(cols) +
                             "x" + std::to_string(bands));
    }
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    if (rows > kMax / cols || rows * cols > kMax / bands) {
        throw DimensionError("cube dims overflow");
    }
    return rows * cols * bands;
}

void check_values(std::span<const float> data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i]) || data[i] < 0.0f) {
            throw DomainError("cube value at flat index " + std::to_string(i) + " is negative or non-finite");
        }
    }
}

}  // namespace

HyperCube::HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, float value_scale)
    : rows_(rows), cols_(cols), bands_(bands), value_scale_(value_scale),
      data_(checked_volume(rows, cols, bands), 0.0f) {}

HyperCube::HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<float> data,
                     float value_scale)
    : rows_(rows), cols_(cols), bands_(bands), value_scale_(value_scale), data_(std::move(data)) {
    const auto n = checked_volume(rows, cols, bands);
    if (data_.size() != n) {
        throw DimensionError("cube payload has " + std::to_string(data_.size()) + " values, expected " +
                             std::to_string(n));
    }
    check_values(data_);
}

std::vector<double> HyperCube::vectorize() const { return {data_.begin(), data_.end()}; }

HyperCube HyperCube::devectorize(std::span<const double> flat, std::size_t rows, std::size_t cols, std::size_t bands,
                                 float value_scale) {
    std::vector<float> data(flat.begin(), flat.end());
    return {rows, cols, bands, std::move(data), value_scale};
}

bool operator==(const HyperCube& a, const HyperCube& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bands_ == b.bands_ && a.data_ == b.data_;
}

HyperCube crop(const HyperCube& cube, const CropWindow& window) {
    if (window.side == 0 || window.origin_row + window.side > cube.rows() ||
        window.origin_col + window.side > cube.cols()) {
        throw RangeError("crop window (" + std::to_string(window.origin_row) + ", " +
                         std::to_string(window.origin_col) + ") side " + std::to_string(window.side) +
                         " does not fit in " + std::to_string(cube.rows()) + "x" + std::to_string(cube.cols()));
    }
    HyperCube out(window.side, window.side, cube.bands(), cube.value_scale());
    for (std::size_t b = 0; b < cube.bands(); ++b) {
        const auto src = cube.plane(b);
        auto dst = out.mutable_plane(b);
        for (std::size_t r = 0; r < window.side; ++r) {
            const auto* row = src.data() + (window.origin_row + r) * cube.cols() + window.origin_col;
            std::copy(row, row + window.side, dst.data() + r * window.side);
        }
    }
    return out;
}

std::vector<CropWindow> enumerate_crops(std::size_t rows, std::size_t cols, std::size_t side, std::size_t stride_rows,
                                        std::size_t stride_cols) {
    if (side == 0 || side > rows || side > cols) {
        throw DimensionError("crop side " + std::to_string(side) + " does not fit in " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    if (stride_rows == 0 || stride_cols == 0) {
        throw DimensionError("crop strides must be >= 1");
    }
    const std::size_t n_rows = (rows - side) / stride_rows + 1;
    const std::size_t n_cols = (cols - side) / stride_cols + 1;
    std::vector<CropWindow> out;
    out.reserve(n_rows * n_cols);
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t j = 0; j < n_cols; ++j) {
            out.push_back({i * stride_rows, j * stride_cols, side});
        }
    }
    return out;
}

HyperCube select_bands(const HyperCube& cube, std::span<const std::size_t> band_indices) {
    if (band_indices.empty()) {
        throw IndexError("band selection is empty");
    }
    for (std::size_t i = 0; i < band_indices.size(); ++i) {
        if (band_indices[i] >= cube.bands()) {
            throw IndexError("band index " + std::to_string(band_indices[i]) + " out of range for " +
                             std::to_string(cube.bands()) + " bands");
        }
        if (i > 0 && band_indices[i] <= band_indices[i - 1]) {
            throw IndexError("band indices must be unique and ascending");
        }
    }
    HyperCube out(cube.rows(), cube.cols(), band_indices.size(), cube.value_scale());
    for (std::size_t i = 0; i < band_indices.size(); ++i) {
        const auto src = cube.plane(band_indices[i]);
        std::copy(src.begin(), src.end(), out.mutable_plane(i).begin());
    }
    return out;
}

}  // namespace ctis
