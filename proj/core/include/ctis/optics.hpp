#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "ctis/hypercube.hpp"

namespace ctis {

enum class WeightMode : std::uint8_t {
    unit,      ///< every voxel contributes 1.0 to each diffraction order
    averaged,  ///< every voxel contributes 1/bands to each order
};

[[nodiscard]] std::string_view to_string(WeightMode mode) noexcept;
[[nodiscard]] WeightMode weight_mode_from_string(std::string_view name);

/// Canonical shift table: (1,3,5,7,9) for 5 bands, (2,4,...,50) for 25 bands,
/// otherwise the odd sequence 1,3,...,2b-1.
[[nodiscard]] std::vector<std::uint32_t> default_shifts(std::size_t bands);

/// Shape of a simulated CTIS frame.
///
/// Canvas layout (m = max shift, B = block_side = side + 2m, q = side + 2B):
///
///         +-----+
///         | top |
///   +-----+-----+-----+
///   |left |  0  |right|
///   +-----+-----+-----+
///         | bot |
///         +-----+
///
/// The zeroth-order square sits at canvas offset (B, B). Each first-order
/// block is B x B and edge-adjacent to the zeroth-order square; inside it the
/// unshifted band image would be centered, and band k is moved outward (away
/// from the canvas center) by shifts[k]. The central block is the B x B
/// square concentric with the canvas, so neighbouring blocks share m-wide
/// strips that are zero in both.
class ShiftGeometry {
public:
    ShiftGeometry() = default;

    /// Throws DimensionError if side == 0, shifts.size() == 0, shifts are
    /// not strictly ascending or start below 1; CapacityError on overflow.
    ShiftGeometry(std::size_t cube_side, std::vector<std::uint32_t> shifts, WeightMode mode = WeightMode::unit);

    /// Geometry with default_shifts(bands).
    static ShiftGeometry with_default_shifts(std::size_t cube_side, std::size_t bands,
                                             WeightMode mode = WeightMode::unit);

    [[nodiscard]] std::size_t cube_side() const noexcept { return side_; }
    [[nodiscard]] std::size_t bands() const noexcept { return shifts_.size(); }
    [[nodiscard]] std::span<const std::uint32_t> shifts() const noexcept { return shifts_; }
    [[nodiscard]] std::size_t max_shift() const noexcept { return shifts_.empty() ? 0 : shifts_.back(); }
    [[nodiscard]] std::size_t block_side() const noexcept { return side_ + 2 * max_shift(); }
    [[nodiscard]] std::size_t canvas_side() const noexcept { return side_ + 2 * block_side(); }
    [[nodiscard]] WeightMode weight_mode() const noexcept { return mode_; }

    /// Per-order contribution of one voxel (1 or 1/bands).
    [[nodiscard]] double order_weight() const noexcept;

    /// Canvas coordinates of the five projections of voxel (row, col, band),
    /// in the order center, top, left, right, bottom.
    struct Projections {
        std::array<std::size_t, 5> row;
        std::array<std::size_t, 5> col;
    };
    [[nodiscard]] Projections project(std::size_t row, std::size_t col, std::size_t band) const noexcept;

    friend bool operator==(const ShiftGeometry&, const ShiftGeometry&) = default;

private:
    std::size_t side_ = 0;
    std::vector<std::uint32_t> shifts_;
    WeightMode mode_ = WeightMode::unit;
};

/// A q x q diffraction frame, row-major, with the geometry that produced it.
class CtisImage {
public:
    CtisImage() = default;
    explicit CtisImage(ShiftGeometry geometry);
    /// Throws DimensionError if data.size() != q*q; DomainError on
    /// negative or non-finite values.
    CtisImage(ShiftGeometry geometry, std::vector<float> data);

    [[nodiscard]] const ShiftGeometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::size_t side() const noexcept { return geometry_.canvas_side(); }
    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }
    [[nodiscard]] std::span<float> mutable_data() noexcept { return data_; }
    [[nodiscard]] float at(std::size_t row, std::size_t col) const noexcept { return data_[row * side() + col]; }

    /// True when every pixel outside the plus-shaped footprint is zero.
    [[nodiscard]] bool corners_are_zero() const noexcept;

    /// The frame as a (q, q, 1) cube for HSC1 export.
    [[nodiscard]] HyperCube as_cube() const;

    friend bool operator==(const CtisImage&, const CtisImage&) = default;

private:
    ShiftGeometry geometry_;
    std::vector<float> data_;
};

enum class BlockPosition : std::uint8_t { top = 0, left = 1, center = 2, right = 3, bottom = 4 };

/// The five per-order sub-images, each block_side x block_side, stacked in
/// the order top, left, center, right, bottom.
struct BlockSet {
    ShiftGeometry geometry;
    HyperCube blocks;  ///< (block_side, block_side, 5)

    [[nodiscard]] std::span<const float> block(BlockPosition pos) const noexcept {
        return blocks.plane(static_cast<std::size_t>(pos));
    }
};

/// Forward model. Throws DimensionError if the cube is not square or does not
/// match the geometry.
[[nodiscard]] CtisImage simulate(const HyperCube& cube, const ShiftGeometry& geometry);

[[nodiscard]] BlockSet extract_blocks(const CtisImage& image);

/// Pastes the five blocks back onto a blank canvas.
[[nodiscard]] CtisImage reassemble(const BlockSet& blocks);

/// Row-major flat copy (length q*q) in double precision.
[[nodiscard]] std::vector<double> vectorize(const CtisImage& image);
/// Throws DimensionError unless flat.size() == q*q.
[[nodiscard]] CtisImage devectorize(std::span<const double> flat, const ShiftGeometry& geometry);

/// Writes the frame as an HSC1 file (x = y = q, b = 1) plus `<path>.json`
/// carrying the geometry.
void write_image(const CtisImage& image, const std::filesystem::path& path);
/// Reads an image written by write_image. The sidecar must exist.
[[nodiscard]] CtisImage read_image(const std::filesystem::path& path);

[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& image_path);

}  // namespace ctis
