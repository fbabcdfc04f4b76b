#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ctis {

/// Dense hyperspectral cube of nonnegative float intensities.
///
/// Layout is band-slowest: `bands` planes of `rows * cols` values, each plane
/// row-major. The flat index of voxel (row, col, band) is
/// `band * rows * cols + row * cols + col`; this is also the column order of
/// the CTIS system matrix.
///
/// In the HSC1 file format `x` is the width (cols) and `y` the height (rows).
class HyperCube {
public:
    static constexpr float kDefaultScale = 255.0f;

    HyperCube() = default;

    /// Zero-filled cube. Throws DimensionError on a zero extent or overflow.
    HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, float value_scale = kDefaultScale);

    /// Adopts `data`. Throws DimensionError on a length mismatch and
    /// DomainError on negative or non-finite values.
    HyperCube(std::size_t rows, std::size_t cols, std::size_t bands, std::vector<float> data,
              float value_scale = kDefaultScale);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t bands() const noexcept { return bands_; }
    [[nodiscard]] std::size_t plane_size() const noexcept { return rows_ * cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] float value_scale() const noexcept { return value_scale_; }

    [[nodiscard]] std::size_t index(std::size_t row, std::size_t col, std::size_t band) const noexcept {
        return band * rows_ * cols_ + row * cols_ + col;
    }

    [[nodiscard]] float at(std::size_t row, std::size_t col, std::size_t band) const noexcept {
        return data_[index(row, col, band)];
    }

    /// Unchecked write; callers keep values finite and nonnegative.
    void set(std::size_t row, std::size_t col, std::size_t band, float v) noexcept {
        data_[index(row, col, band)] = v;
    }

    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }
    [[nodiscard]] std::span<const float> plane(std::size_t band) const noexcept {
        return std::span<const float>(data_).subspan(band * plane_size(), plane_size());
    }
    [[nodiscard]] std::span<float> mutable_plane(std::size_t band) noexcept {
        return std::span<float>(data_).subspan(band * plane_size(), plane_size());
    }

    /// Flat copy in double precision, in the documented vectorization order.
    [[nodiscard]] std::vector<double> vectorize() const;

    /// Inverse of vectorize(). Negative or non-finite entries throw DomainError.
    static HyperCube devectorize(std::span<const double> flat, std::size_t rows, std::size_t cols,
                                 std::size_t bands, float value_scale = kDefaultScale);

    friend bool operator==(const HyperCube& a, const HyperCube& b) noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t bands_ = 0;
    float value_scale_ = kDefaultScale;
    std::vector<float> data_;
};

/// Square spatial window; `side` applies to both rows and columns.
struct CropWindow {
    std::size_t origin_row = 0;
    std::size_t origin_col = 0;
    std::size_t side = 0;

    friend bool operator==(const CropWindow&, const CropWindow&) = default;
};

/// Copies the window out of `cube`. Throws RangeError if it does not fit.
[[nodiscard]] HyperCube crop(const HyperCube& cube, const CropWindow& window);

/// Every window of `side` on a rows x cols extent at the given strides,
/// row-major. Count is floor((rows-side)/stride_rows+1) * floor((cols-side)/stride_cols+1).
[[nodiscard]] std::vector<CropWindow> enumerate_crops(std::size_t rows, std::size_t cols, std::size_t side,
                                                      std::size_t stride_rows, std::size_t stride_cols);

/// Keeps the listed bands. Indices must be unique, ascending and in range
/// (IndexError otherwise).
[[nodiscard]] HyperCube select_bands(const HyperCube& cube, std::span<const std::size_t> band_indices);

}  // namespace ctis
