#pragma once

// Shared fixtures for the test suites. The dense oracle below derives the
// projection from block origins and in-block offsets, independently of
// ShiftGeometry::project and the sparse matrix code.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ctis/hypercube.hpp"
#include "ctis/optics.hpp"

namespace ctis::test {

inline HyperCube random_cube(std::size_t rows, std::size_t cols, std::size_t bands, std::uint64_t seed,
                             double lo = 0.0, double hi = 255.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<float> data(rows * cols * bands);
    for (auto& v : data) v = static_cast<float>(dist(rng));
    return {rows, cols, bands, std::move(data)};
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

/// Largest |a_i - b_i| divided by max(max|b_i|, tiny).
inline double rel_max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return diff / std::max(scale, 1e-300);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("ctis_test_" + tag + "_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Dense q^2 x r matrix built straight from the plus-shaped layout: each
/// order is a block of side x+2m at a fixed canvas origin; inside its block a
/// voxel sits at offset m, pushed outward by the band shift.
struct DenseOracle {
    std::size_t q2 = 0;
    std::size_t r = 0;
    std::vector<double> h;  // row-major

    explicit DenseOracle(const ShiftGeometry& g) {
        const std::size_t x = g.cube_side();
        const std::size_t m = g.max_shift();
        const std::size_t block = x + 2 * m;
        const std::size_t q = x + 2 * block;
        q2 = q * q;
        r = x * x * g.bands();
        h.assign(q2 * r, 0.0);
        const double w = g.weight_mode() == WeightMode::unit ? 1.0
                                                             : static_cast<double>(1.0f / static_cast<float>(g.bands()));
        // Canvas origins of the five blocks, (row, col).
        const long origin[5][2] = {
            {0, static_cast<long>(x + m)},                          // top
            {static_cast<long>(x + m), 0},                          // left
            {static_cast<long>(x + m), static_cast<long>(x + m)},   // center
            {static_cast<long>(x + m), static_cast<long>(q - block)},  // right
            {static_cast<long>(q - block), static_cast<long>(x + m)},  // bottom
        };
        // Outward unit direction of each order.
        const long dir[5][2] = {{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}};
        for (std::size_t b = 0; b < g.bands(); ++b) {
            const long s = static_cast<long>(g.shifts()[b]);
            for (std::size_t row = 0; row < x; ++row) {
                for (std::size_t col = 0; col < x; ++col) {
                    const std::size_t j = b * x * x + row * x + col;
                    for (int o = 0; o < 5; ++o) {
                        const long pr = origin[o][0] + static_cast<long>(m + row) + dir[o][0] * s;
                        const long pc = origin[o][1] + static_cast<long>(m + col) + dir[o][1] * s;
                        h[(static_cast<std::size_t>(pr) * q + static_cast<std::size_t>(pc)) * r + j] += w;
                    }
                }
            }
        }
    }

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return h[i * r + j]; }

    [[nodiscard]] std::vector<double> matvec(const std::vector<double>& f) const {
        std::vector<double> g(q2, 0.0);
        for (std::size_t i = 0; i < q2; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < r; ++j) s += h[i * r + j] * f[j];
            g[i] = s;
        }
        return g;
    }

    [[nodiscard]] std::vector<double> rmatvec(const std::vector<double>& v) const {
        std::vector<double> out(r, 0.0);
        for (std::size_t i = 0; i < q2; ++i) {
            if (v[i] == 0.0) continue;
            for (std::size_t j = 0; j < r; ++j) out[j] += h[i * r + j] * v[i];
        }
        return out;
    }

    /// One multiplicative EM update evaluated entry by entry.
    [[nodiscard]] std::vector<double> em_step(const std::vector<double>& g, const std::vector<double>& f,
                                              double eps = 1e-12) const {
        const auto ghat = matvec(f);
        std::vector<double> ratio(q2);
        for (std::size_t i = 0; i < q2; ++i) ratio[i] = g[i] / std::max(ghat[i], eps);
        std::vector<double> out(r);
        for (std::size_t j = 0; j < r; ++j) {
            double colsum = 0.0, back = 0.0;
            for (std::size_t i = 0; i < q2; ++i) {
                colsum += h[i * r + j];
                back += h[i * r + j] * ratio[i];
            }
            out[j] = f[j] / std::max(colsum, eps) * back;
        }
        return out;
    }
};

}  // namespace ctis::test
