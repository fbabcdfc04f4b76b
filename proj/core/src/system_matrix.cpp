#include "ctis/system_matrix.hpp"

#include <fstream>
#include <limits>
#include <string>

#include "ctis/cube_io.hpp"
#include "ctis/detail/binary.hpp"
#include "ctis/error.hpp"
#include "ctis/parallel.hpp"

namespace ctis {

SparseSystemMatrix SparseSystemMatrix::build(const ShiftGeometry& geometry, std::size_t spatial_rows) {
    const std::size_t x = geometry.cube_side();
    if (x == 0 || geometry.bands() == 0) throw DimensionError("geometry is empty");
    if (spatial_rows != x) {
        throw DimensionError("system matrix needs a square cube: rows " + std::to_string(spatial_rows) +
                             " != side " + std::to_string(x));
    }
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t q = geometry.canvas_side();
    const std::uint64_t plane = std::uint64_t{x} * x;
    // Voxel counts are capped at the cube container limit.
    if (q > kMax / q || plane > kMax / geometry.bands() || plane * geometry.bands() > kMaxVoxels) {
        throw CapacityError("system matrix of side " + std::to_string(x) + " with " +
                            std::to_string(geometry.bands()) + " bands exceeds the index range");
    }

    SparseSystemMatrix H;
    H.geometry_ = geometry;
    H.rows_ = q * q;
    H.cols_ = plane * geometry.bands();
    H.plane_cols_ = plane;
    const std::uint64_t nnz = H.cols_ * kNonzerosPerColumn;
    H.col_offset_.resize(H.cols_ + 1);
    H.row_index_.resize(nnz);
    H.values_.assign(nnz, static_cast<float>(geometry.order_weight()));

    std::uint64_t j = 0;
    for (std::size_t b = 0; b < geometry.bands(); ++b) {
        for (std::size_t r = 0; r < x; ++r) {
            for (std::size_t c = 0; c < x; ++c, ++j) {
                const auto p = geometry.project(r, c, b);
                const std::uint64_t off = j * kNonzerosPerColumn;
                H.col_offset_[j] = off;
                for (std::size_t o = 0; o < kNonzerosPerColumn; ++o) {
                    H.row_index_[off + o] = std::uint64_t{p.row[o]} * q + p.col[o];
                }
            }
        }
    }
    H.col_offset_[H.cols_] = nnz;
    return H;
}

double SparseSystemMatrix::sparsity() const noexcept {
    const double total = static_cast<double>(rows_) * static_cast<double>(cols_);
    return total == 0.0 ? 0.0 : (total - static_cast<double>(nonzeros())) / total;
}

double SparseSystemMatrix::column_sparsity() const noexcept {
    const double q2 = static_cast<double>(rows_);
    return q2 == 0.0 ? 0.0 : (q2 - static_cast<double>(kNonzerosPerColumn)) / q2;
}

std::size_t SparseSystemMatrix::memory_bytes() const noexcept {
    return col_offset_.size() * sizeof(std::uint64_t) + row_index_.size() * sizeof(std::uint64_t) +
           values_.size() * sizeof(float);
}

void SparseSystemMatrix::matvec(std::span<const double> f, std::span<double> out) const {
    if (f.size() != cols_ || out.size() != rows_) {
        throw DimensionError("matvec: input length " + std::to_string(f.size()) + " (expected " +
                             std::to_string(cols_) + "), output length " + std::to_string(out.size()) +
                             " (expected " + std::to_string(rows_) + ")");
    }
    std::fill(out.begin(), out.end(), 0.0);
    // Planes in order so every output pixel accumulates bands in ascending
    // order; columns inside a plane write disjoint rows.
    for (std::uint64_t b = 0; b < geometry_.bands(); ++b) {
        const std::uint64_t first = b * plane_cols_;
        parallel_for(plane_cols_, [&](std::size_t begin, std::size_t end) {
            for (std::uint64_t j = first + begin; j < first + end; ++j) {
                const double v = f[j];
                if (v == 0.0) continue;
                for (std::uint64_t k = col_offset_[j]; k < col_offset_[j + 1]; ++k) {
                    out[row_index_[k]] += static_cast<double>(values_[k]) * v;
                }
            }
        });
    }
}

std::vector<double> SparseSystemMatrix::matvec(std::span<const double> f) const {
    std::vector<double> out(rows_);
    matvec(f, out);
    return out;
}

void SparseSystemMatrix::rmatvec(std::span<const double> v, std::span<double> out) const {
    if (v.size() != rows_ || out.size() != cols_) {
        throw DimensionError("rmatvec: input length " + std::to_string(v.size()) + " (expected " +
                             std::to_string(rows_) + "), output length " + std::to_string(out.size()) +
                             " (expected " + std::to_string(cols_) + ")");
    }
    parallel_for(cols_, [&](std::size_t begin, std::size_t end) {
        for (std::uint64_t j = begin; j < end; ++j) {
            double s = 0.0;
            for (std::uint64_t k = col_offset_[j]; k < col_offset_[j + 1]; ++k) {
                s += static_cast<double>(values_[k]) * v[row_index_[k]];
            }
            out[j] = s;
        }
    });
}

std::vector<double> SparseSystemMatrix::rmatvec(std::span<const double> v) const {
    std::vector<double> out(cols_);
    rmatvec(v, out);
    return out;
}

std::vector<double> SparseSystemMatrix::column_sums() const {
    std::vector<double> out(cols_);
    for (std::uint64_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::uint64_t k = col_offset_[j]; k < col_offset_[j + 1]; ++k) s += static_cast<double>(values_[k]);
        out[j] = s;
    }
    return out;
}

void SparseSystemMatrix::dump(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    detail::put_le(out, std::uint64_t{geometry_.canvas_side()});
    detail::put_le(out, cols_);
    detail::put_le(out, nonzeros());
    for (auto o : col_offset_) detail::put_le(out, o);
    for (auto r : row_index_) detail::put_le(out, r);
    for (auto v : values_) detail::put_f32(out, v);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ctis
