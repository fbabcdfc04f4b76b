#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ctis/optics.hpp"

namespace ctis {

/// Sparse CTIS system matrix H (q^2 rows, side*side*bands columns) in
/// compressed sparse column form.
///
/// Column j is voxel j in HyperCube vectorization order; its five entries are
/// the voxel's detector pixels in the order center, top, left, right, bottom.
/// Columns of a single band plane never share a row, which lets matvec split
/// each plane across workers without write conflicts and keeps the result
/// bit-identical for any worker count.
class SparseSystemMatrix {
public:
    static constexpr std::size_t kNonzerosPerColumn = 5;

    /// Builds H for a square cube of `geometry.cube_side()`; `spatial_rows`
    /// must equal it. Throws DimensionError / CapacityError.
    static SparseSystemMatrix build(const ShiftGeometry& geometry, std::size_t spatial_rows);
    static SparseSystemMatrix build(const ShiftGeometry& geometry) {
        return build(geometry, geometry.cube_side());
    }

    [[nodiscard]] std::uint64_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::uint64_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::uint64_t nonzeros() const noexcept { return row_index_.size(); }
    [[nodiscard]] const ShiftGeometry& geometry() const noexcept { return geometry_; }

    [[nodiscard]] std::span<const std::uint64_t> column_offsets() const noexcept { return col_offset_; }
    [[nodiscard]] std::span<const std::uint64_t> row_indices() const noexcept { return row_index_; }
    [[nodiscard]] std::span<const float> values() const noexcept { return values_; }

    [[nodiscard]] std::span<const std::uint64_t> column_rows(std::uint64_t j) const noexcept {
        return row_indices().subspan(col_offset_[j], col_offset_[j + 1] - col_offset_[j]);
    }
    [[nodiscard]] std::span<const float> column_values(std::uint64_t j) const noexcept {
        return values().subspan(col_offset_[j], col_offset_[j + 1] - col_offset_[j]);
    }

    /// Fraction of zero entries in the whole matrix.
    [[nodiscard]] double sparsity() const noexcept;
    /// Fraction of zero entries in one column, (rows - 5) / rows.
    [[nodiscard]] double column_sparsity() const noexcept;

    /// Approximate heap footprint in bytes.
    [[nodiscard]] std::size_t memory_bytes() const noexcept;

    /// g = H f. Throws DimensionError unless f.size() == cols().
    [[nodiscard]] std::vector<double> matvec(std::span<const double> f) const;
    void matvec(std::span<const double> f, std::span<double> out) const;

    /// f = H^T v. Throws DimensionError unless v.size() == rows().
    [[nodiscard]] std::vector<double> rmatvec(std::span<const double> v) const;
    void rmatvec(std::span<const double> v, std::span<double> out) const;

    /// Entry j is the sum of column j.
    [[nodiscard]] std::vector<double> column_sums() const;

    /// Debug dump: uint64 LE q, r, nnz; then offsets (r+1 x uint64),
    /// row indices (nnz x uint64), values (nnz x float32).
    void dump(const std::filesystem::path& path) const;

private:
    ShiftGeometry geometry_;
    std::uint64_t rows_ = 0;
    std::uint64_t cols_ = 0;
    std::uint64_t plane_cols_ = 0;
    std::vector<std::uint64_t> col_offset_;
    std::vector<std::uint64_t> row_index_;
    std::vector<float> values_;
};

}  // namespace ctis
