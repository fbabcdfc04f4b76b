#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "ctis/error.hpp"
#include "ctis/parallel.hpp"
#include "ctis/system_matrix.hpp"
#include "support/test_support.hpp"

namespace ctis {
namespace {

using test::DenseOracle;
using test::random_cube;
using test::random_vector;
using test::rel_max_diff;

TEST(SystemMatrix, SmallestInstance) {
    const ShiftGeometry g(4, std::vector<std::uint32_t>{1});
    const auto H = SparseSystemMatrix::build(g);
    EXPECT_EQ(g.canvas_side(), 16u);
    EXPECT_EQ(H.rows(), 256u);
    EXPECT_EQ(H.cols(), 16u);
    for (std::uint64_t j = 0; j < H.cols(); ++j) EXPECT_EQ(H.column_rows(j).size(), 5u);
}

TEST(SystemMatrix, Shape100x25) {
    std::vector<std::uint32_t> s(25);
    std::iota(s.begin(), s.end(), 1u);
    const auto H = SparseSystemMatrix::build(ShiftGeometry(100, s));
    EXPECT_EQ(H.rows(), 160000u);
    EXPECT_EQ(H.cols(), 250000u);
    EXPECT_EQ(H.nonzeros(), 1250000u);
    EXPECT_NEAR(H.column_sparsity(), 0.99997, 5e-6);
    EXPECT_DOUBLE_EQ(H.column_sparsity(), (160000.0 - 5.0) / 160000.0);
    EXPECT_DOUBLE_EQ(H.sparsity(), H.column_sparsity());
}

TEST(SystemMatrix, StructuralInvariants) {
    for (std::size_t b : {1u, 3u, 5u}) {
        const auto g = ShiftGeometry::with_default_shifts(9, b);
        const auto H = SparseSystemMatrix::build(g);
        EXPECT_EQ(H.nonzeros(), 5 * H.cols());
        EXPECT_EQ(H.column_offsets().size(), H.cols() + 1);
        for (std::uint64_t j = 0; j < H.cols(); ++j) {
            const auto rows = H.column_rows(j);
            const std::set<std::uint64_t> distinct(rows.begin(), rows.end());
            ASSERT_EQ(distinct.size(), 5u) << "column " << j;
            for (auto r : rows) ASSERT_LT(r, H.rows());
            for (float v : H.column_values(j)) ASSERT_GT(v, 0.0f);
        }
    }
}

TEST(SystemMatrix, MemoryScalesLinearly) {
    const auto a = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(10, 3));
    const auto b = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(20, 3));
    const double per_col_a = static_cast<double>(a.memory_bytes()) / static_cast<double>(a.cols());
    const double per_col_b = static_cast<double>(b.memory_bytes()) / static_cast<double>(b.cols());
    EXPECT_NEAR(per_col_a, per_col_b, 0.1 * per_col_a);
}

TEST(SystemMatrix, BuildErrors) {
    const auto g = ShiftGeometry::with_default_shifts(8, 2);
    EXPECT_THROW((void)SparseSystemMatrix::build(g, 9), DimensionError);
    const ShiftGeometry huge(1u << 20, default_shifts(2));
    EXPECT_THROW((void)SparseSystemMatrix::build(huge), CapacityError);
}

TEST(SystemMatrix, MatchesDenseOracleEntrywise) {
    for (auto mode : {WeightMode::unit, WeightMode::averaged}) {
        const auto g = ShiftGeometry::with_default_shifts(8, 3, mode);
        const DenseOracle D(g);
        const auto H = SparseSystemMatrix::build(g);
        std::vector<double> sparse_dense(D.q2 * D.r, 0.0);
        for (std::uint64_t j = 0; j < H.cols(); ++j) {
            const auto rows = H.column_rows(j);
            const auto vals = H.column_values(j);
            for (std::size_t k = 0; k < rows.size(); ++k) sparse_dense[rows[k] * D.r + j] += vals[k];
        }
        EXPECT_EQ(sparse_dense, D.h);
    }
}

TEST(Matvec, ZeroAndUnitVectors) {
    const auto g = ShiftGeometry::with_default_shifts(6, 3);
    const auto H = SparseSystemMatrix::build(g);
    const auto zero = H.matvec(std::vector<double>(H.cols(), 0.0));
    for (double v : zero) ASSERT_EQ(v, 0.0);
    const auto rzero = H.rmatvec(std::vector<double>(H.rows(), 0.0));
    for (double v : rzero) ASSERT_EQ(v, 0.0);
    for (std::uint64_t j : {0ull, 17ull, 107ull}) {
        std::vector<double> e(H.cols(), 0.0);
        e[j] = 1.0;
        const auto out = H.matvec(e);
        const auto rows = H.column_rows(j);
        std::size_t nz = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i] != 0.0) {
                ++nz;
                EXPECT_NE(std::find(rows.begin(), rows.end(), i), rows.end());
            }
        }
        EXPECT_EQ(nz, 5u);
    }
}

TEST(Matvec, DenseOracleX8B3) {
    const auto g = ShiftGeometry::with_default_shifts(8, 3);
    const DenseOracle D(g);
    const auto H = SparseSystemMatrix::build(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = random_vector(D.r, seed, 0, 100);
        EXPECT_LE(rel_max_diff(H.matvec(f), D.matvec(f)), 1e-6);
        const auto v = random_vector(D.q2, seed + 50, 0, 3);
        EXPECT_LE(rel_max_diff(H.rmatvec(v), D.rmatvec(v)), 1e-6);
    }
}

TEST(Matvec, ForwardModelEquivalence) {
    const auto g = ShiftGeometry::with_default_shifts(16, 5);
    const auto H = SparseSystemMatrix::build(g);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = random_cube(16, 16, 5, seed);
        const auto lhs = H.matvec(c.vectorize());
        const auto rhs = vectorize(simulate(c, g));
        ASSERT_LE(rel_max_diff(lhs, rhs), 1e-5) << "seed " << seed;
    }
}

TEST(Matvec, AdjointIdentity) {
    const auto g = ShiftGeometry::with_default_shifts(10, 4, WeightMode::averaged);
    const auto H = SparseSystemMatrix::build(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = random_vector(H.cols(), seed);
        const auto v = random_vector(H.rows(), seed + 9);
        const auto Hf = H.matvec(f);
        const auto Htv = H.rmatvec(v);
        const double a = std::inner_product(Hf.begin(), Hf.end(), v.begin(), 0.0);
        const double b = std::inner_product(f.begin(), f.end(), Htv.begin(), 0.0);
        EXPECT_NEAR(a, b, 1e-10 * std::abs(a));
    }
}

TEST(Matvec, ShiftInvariance) {
    const auto g = ShiftGeometry::with_default_shifts(10, 3);
    const auto H = SparseSystemMatrix::build(g);
    const std::size_t q = g.canvas_side(), x = 10;
    auto sorted_pixels = [&](std::size_t r, std::size_t c, std::size_t b) {
        const auto rows = H.column_rows(b * x * x + r * x + c);
        std::vector<std::pair<long, long>> px;
        for (auto i : rows) px.emplace_back(static_cast<long>(i / q), static_cast<long>(i % q));
        std::sort(px.begin(), px.end());
        return px;
    };
    for (std::size_t b = 0; b < 3; ++b) {
        const auto base = sorted_pixels(2, 3, b);
        for (long dr : {0L, 1L, 5L}) {
            for (long dc : {0L, 2L, 6L}) {
                auto moved = sorted_pixels(2 + dr, 3 + dc, b);
                ASSERT_EQ(moved.size(), base.size());
                for (std::size_t k = 0; k < base.size(); ++k) {
                    EXPECT_EQ(moved[k].first - base[k].first, dr);
                    EXPECT_EQ(moved[k].second - base[k].second, dc);
                }
            }
        }
    }
}

TEST(Matvec, DimensionErrors) {
    const auto H = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(4, 1));
    EXPECT_THROW((void)H.matvec(std::vector<double>(3)), DimensionError);
    EXPECT_THROW((void)H.rmatvec(std::vector<double>(3)), DimensionError);
    std::vector<double> out(5);
    EXPECT_THROW(H.matvec(std::vector<double>(H.cols()), out), DimensionError);
}

TEST(Matvec, DeterministicAcrossThreadCounts) {
    const auto g = ShiftGeometry::with_default_shifts(24, 5);
    const auto H = SparseSystemMatrix::build(g);
    const auto f = random_vector(H.cols(), 3, 0, 100);
    const auto v = random_vector(H.rows(), 4);
    const auto saved = thread_count();
    set_thread_count(1);
    const auto a = H.matvec(f);
    const auto ra = H.rmatvec(v);
    set_thread_count(7);
    const auto b = H.matvec(f);
    const auto rb = H.rmatvec(v);
    set_thread_count(saved);
    EXPECT_EQ(a, b);
    EXPECT_EQ(ra, rb);
}

TEST(ColumnSums, UnitAndAveraged) {
    const auto H = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(8, 5));
    const auto cs = H.column_sums();
    for (double v : cs) ASSERT_EQ(v, 5.0);
    EXPECT_EQ(cs, H.rmatvec(std::vector<double>(H.rows(), 1.0)));
    const auto Ha = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(8, 5, WeightMode::averaged));
    const auto csa = Ha.column_sums();
    for (double v : csa) ASSERT_NEAR(v, 1.0, 1e-6);
    EXPECT_EQ(csa, Ha.rmatvec(std::vector<double>(Ha.rows(), 1.0)));
}

TEST(SystemMatrix, DumpLayout) {
    test::TempDir dir("dump");
    const auto H = SparseSystemMatrix::build(ShiftGeometry::with_default_shifts(4, 2));
    H.dump(dir / "h.bin");
    const auto size = std::filesystem::file_size(dir / "h.bin");
    EXPECT_EQ(size, 3 * 8 + (H.cols() + 1) * 8 + H.nonzeros() * 8 + H.nonzeros() * 4);
    std::ifstream in(dir / "h.bin", std::ios::binary);
    std::uint64_t hdr[3];
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    EXPECT_EQ(hdr[0], H.geometry().canvas_side());
    EXPECT_EQ(hdr[1], H.cols());
    EXPECT_EQ(hdr[2], H.nonzeros());
}

TEST(Parallel, CoversRangeOnce) {
    for (std::size_t threads : {1u, 3u, 8u}) {
        set_thread_count(threads);
        std::vector<int> hits(10007, 0);
        parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) ++hits[i];
        }, 16);
        for (int h : hits) ASSERT_EQ(h, 1);
    }
    set_thread_count(0);
    EXPECT_GE(thread_count(), 1u);
}

}  // namespace
}  // namespace ctis
