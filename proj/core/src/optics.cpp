#include "ctis/optics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ctis/cube_io.hpp"
#include "ctis/error.hpp"
#include "json_util.hpp"

namespace ctis {

std::string_view to_string(WeightMode mode) noexcept {
    return mode == WeightMode::unit ? "unit" : "averaged";
}

WeightMode weight_mode_from_string(std::string_view name) {
    if (name == "unit") return WeightMode::unit;
    if (name == "averaged") return WeightMode::averaged;
    throw ConfigError("unknown weight mode '" + std::string(name) + "'");
}

std::vector<std::uint32_t> default_shifts(std::size_t bands) {
    if (bands == 0) throw DimensionError("band count must be >= 1");
    if (bands > std::numeric_limits<std::uint32_t>::max() / 2) throw CapacityError("band count too large");
    std::vector<std::uint32_t> out(bands);
    for (std::size_t k = 0; k < bands; ++k) {
        out[k] = bands == 25 ? static_cast<std::uint32_t>(2 * (k + 1)) : static_cast<std::uint32_t>(2 * k + 1);
    }
    return out;
}

ShiftGeometry::ShiftGeometry(std::size_t cube_side, std::vector<std::uint32_t> shifts, WeightMode mode)
    : side_(cube_side), shifts_(std::move(shifts)), mode_(mode) {
    if (side_ == 0) throw DimensionError("cube side must be >= 1");
    if (shifts_.empty()) throw DimensionError("shift table is empty");
    if (shifts_.front() < 1) throw DimensionError("shifts must be >= 1");
    for (std::size_t k = 1; k < shifts_.size(); ++k) {
        if (shifts_[k] <= shifts_[k - 1]) throw DimensionError("shifts must be strictly ascending");
    }
    // q^2 must fit comfortably in 64-bit indices.
    if (side_ > (std::size_t{1} << 28) || max_shift() > (std::size_t{1} << 28)) {
        throw CapacityError("geometry too large");
    }
}

ShiftGeometry ShiftGeometry::with_default_shifts(std::size_t cube_side, std::size_t bands, WeightMode mode) {
    return {cube_side, default_shifts(bands), mode};
}

double ShiftGeometry::order_weight() const noexcept {
    if (mode_ == WeightMode::unit) return 1.0;
    return static_cast<double>(static_cast<float>(1.0 / static_cast<double>(bands())));
}

ShiftGeometry::Projections ShiftGeometry::project(std::size_t row, std::size_t col, std::size_t band) const noexcept {
    const std::size_t x = side_;
    const std::size_t m = max_shift();
    const std::size_t B = block_side();
    const std::size_t s = shifts_[band];
    Projections p{};
    // center
    p.row[0] = B + row;
    p.col[0] = B + col;
    // top: block rows [0, B), image base at row m, moved up by s
    p.row[1] = m - s + row;
    p.col[1] = B + col;
    // left: block cols [0, B), base col m, moved left by s
    p.row[2] = B + row;
    p.col[2] = m - s + col;
    // right: block cols [x + B, q), base col x + B + m, moved right by s
    p.row[3] = B + row;
    p.col[3] = x + B + m + s + col;
    // bottom
    p.row[4] = x + B + m + s + row;
    p.col[4] = B + col;
    return p;
}

CtisImage::CtisImage(ShiftGeometry geometry)
    : geometry_(std::move(geometry)), data_(geometry_.canvas_side() * geometry_.canvas_side(), 0.0f) {}

CtisImage::CtisImage(ShiftGeometry geometry, std::vector<float> data)
    : geometry_(std::move(geometry)), data_(std::move(data)) {
    const auto q = geometry_.canvas_side();
    if (data_.size() != q * q) {
        throw DimensionError("image has " + std::to_string(data_.size()) + " pixels, expected " +
                             std::to_string(q * q));
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i]) || data_[i] < 0.0f) {
            throw DomainError("image pixel " + std::to_string(i) + " is negative or non-finite");
        }
    }
}

bool CtisImage::corners_are_zero() const noexcept {
    const std::size_t q = side();
    const std::size_t lo = geometry_.block_side() - geometry_.max_shift();
    const std::size_t hi = lo + geometry_.block_side();
    for (std::size_t r = 0; r < q; ++r) {
        if (r >= lo && r < hi) continue;
        for (std::size_t c = 0; c < q; ++c) {
            if (c >= lo && c < hi) continue;
            if (data_[r * q + c] != 0.0f) return false;
        }
    }
    return true;
}

HyperCube CtisImage::as_cube() const { return {side(), side(), 1, data_}; }

CtisImage simulate(const HyperCube& cube, const ShiftGeometry& geometry) {
    const std::size_t x = geometry.cube_side();
    if (cube.rows() != cube.cols()) {
        throw DimensionError("simulate needs a square cube, got " + std::to_string(cube.rows()) + "x" +
                             std::to_string(cube.cols()));
    }
    if (cube.rows() != x || cube.bands() != geometry.bands()) {
        throw DimensionError("cube " + std::to_string(cube.rows()) + "x" + std::to_string(cube.cols()) + "x" +
                             std::to_string(cube.bands()) + " does not match geometry side " + std::to_string(x) +
                             " with " + std::to_string(geometry.bands()) + " bands");
    }
    const std::size_t q = geometry.canvas_side();
    const double w = geometry.order_weight();
    std::vector<double> acc(q * q, 0.0);
    // Bands in ascending order; within one band no two voxels hit the same pixel.
    for (std::size_t b = 0; b < geometry.bands(); ++b) {
        for (std::size_t r = 0; r < x; ++r) {
            for (std::size_t c = 0; c < x; ++c) {
                const double v = w * static_cast<double>(cube.at(r, c, b));
                const auto p = geometry.project(r, c, b);
                for (std::size_t o = 0; o < 5; ++o) acc[p.row[o] * q + p.col[o]] += v;
            }
        }
    }
    CtisImage img(geometry);
    auto out = img.mutable_data();
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i]);
    return img;
}

namespace {

struct BlockOrigin {
    std::size_t row;
    std::size_t col;
};

/// Canvas origin of each block, in BlockPosition order.
std::array<BlockOrigin, 5> block_origins(const ShiftGeometry& g) {
    const std::size_t mid = g.block_side() - g.max_shift();  // x + m
    const std::size_t far = g.canvas_side() - g.block_side();
    return {{{0, mid}, {mid, 0}, {mid, mid}, {mid, far}, {far, mid}}};
}

}  // namespace

BlockSet extract_blocks(const CtisImage& image) {
    const auto& g = image.geometry();
    const std::size_t B = g.block_side();
    const std::size_t q = g.canvas_side();
    HyperCube blocks(B, B, 5);
    const auto origins = block_origins(g);
    const auto src = image.data();
    for (std::size_t k = 0; k < 5; ++k) {
        auto dst = blocks.mutable_plane(k);
        for (std::size_t r = 0; r < B; ++r) {
            const auto* row = src.data() + (origins[k].row + r) * q + origins[k].col;
            std::copy(row, row + B, dst.data() + r * B);
        }
    }
    return {g, std::move(blocks)};
}

CtisImage reassemble(const BlockSet& set) {
    const auto& g = set.geometry;
    const std::size_t B = g.block_side();
    const std::size_t q = g.canvas_side();
    if (set.blocks.rows() != B || set.blocks.cols() != B || set.blocks.bands() != 5) {
        throw DimensionError("block stack must be " + std::to_string(B) + "x" + std::to_string(B) + "x5");
    }
    CtisImage img(g);
    auto dst = img.mutable_data();
    const auto origins = block_origins(g);
    for (std::size_t k = 0; k < 5; ++k) {
        const auto src = set.blocks.plane(k);
        for (std::size_t r = 0; r < B; ++r) {
            std::copy(src.data() + r * B, src.data() + (r + 1) * B, dst.data() + (origins[k].row + r) * q + origins[k].col);
        }
    }
    return img;
}

std::vector<double> vectorize(const CtisImage& image) { return {image.data().begin(), image.data().end()}; }

CtisImage devectorize(std::span<const double> flat, const ShiftGeometry& geometry) {
    const auto q = geometry.canvas_side();
    if (flat.size() != q * q) {
        throw DimensionError("vector length " + std::to_string(flat.size()) + " does not match q^2 = " +
                             std::to_string(q * q));
    }
    return {geometry, std::vector<float>(flat.begin(), flat.end())};
}

std::filesystem::path sidecar_path(const std::filesystem::path& image_path) {
    auto p = image_path;
    p += ".json";
    return p;
}

void write_image(const CtisImage& image, const std::filesystem::path& path) {
    write_cube(image.as_cube(), path);
    nlohmann::json meta = detail::geometry_to_json(image.geometry());
    meta["format"] = "ctis-image";
    std::ofstream out(sidecar_path(path), std::ios::trunc);
    if (!out) throw IoError("cannot open " + sidecar_path(path).string() + " for writing");
    out << meta.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + sidecar_path(path).string());
}

CtisImage read_image(const std::filesystem::path& path) {
    const auto meta_path = sidecar_path(path);
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw IoError("cannot open image metadata " + meta_path.string());
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad image metadata " + meta_path.string() + ": " + e.what(), 0);
    }
    const auto geometry = detail::geometry_from_json(meta);
    auto cube = read_cube(path);
    const auto q = geometry.canvas_side();
    if (cube.rows() != q || cube.cols() != q || cube.bands() != 1) {
        throw FormatError("image " + path.string() + " is " + std::to_string(cube.cols()) + "x" +
                              std::to_string(cube.rows()) + "x" + std::to_string(cube.bands()) +
                              ", metadata expects " + std::to_string(q) + "x" + std::to_string(q) + "x1",
                          4);
    }
    return {geometry, std::vector<float>(cube.data().begin(), cube.data().end())};
}

}  // namespace ctis
