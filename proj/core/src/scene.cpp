#include "ctis/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ctis/detail/rng.hpp"
#include "ctis/error.hpp"

namespace ctis {
namespace {

using detail::Engine;

/// Baseline plus a Gaussian bump over the band axis.
struct Spectrum {
    double base = 0.0;
    double height = 0.0;
    double center = 0.0;
    double width = 1.0;

    [[nodiscard]] double at(std::size_t band) const {
        const double d = (static_cast<double>(band) - center) / width;
        return base + height * std::exp(-0.5 * d * d);
    }
};

Spectrum draw_spectrum(Engine& rng, const SceneSpec& spec) {
    const double scale = spec.value_scale;
    Spectrum s;
    s.base = detail::uniform(rng, 0.02, 0.15) * scale;
    s.height = detail::uniform(rng, 0.3, 0.8) * scale;
    s.center = detail::uniform(rng, -0.5, static_cast<double>(spec.bands) - 0.5);
    s.width = detail::uniform(rng, spec.min_peak_width, spec.max_peak_width);
    return s;
}

float clamp_value(double v, float scale) { return static_cast<float>(std::clamp(v, 0.0, static_cast<double>(scale))); }

void fill_mosaic(const SceneSpec& spec, Engine& rng, Scene& scene) {
    if (spec.grid_rows == 0 || spec.grid_cols == 0 || spec.grid_rows > spec.rows || spec.grid_cols > spec.cols) {
        throw DimensionError("mosaic grid " + std::to_string(spec.grid_rows) + "x" + std::to_string(spec.grid_cols) +
                             " does not fit the scene");
    }
    auto& cube = scene.cube;
    const float background = spec.background_level * spec.value_scale / HyperCube::kDefaultScale;
    for (std::size_t b = 0; b < spec.bands; ++b) {
        auto plane = cube.mutable_plane(b);
        std::fill(plane.begin(), plane.end(), clamp_value(background, spec.value_scale));
    }

    std::uint32_t label = 0;
    for (std::size_t gr = 0; gr < spec.grid_rows; ++gr) {
        const std::size_t r0 = gr * spec.rows / spec.grid_rows;
        const std::size_t r1 = (gr + 1) * spec.rows / spec.grid_rows;
        const std::size_t gap_r = (r1 - r0) >= 3 ? std::max<std::size_t>(1, (r1 - r0) / 6) : 0;
        for (std::size_t gc = 0; gc < spec.grid_cols; ++gc) {
            const std::size_t c0 = gc * spec.cols / spec.grid_cols;
            const std::size_t c1 = (gc + 1) * spec.cols / spec.grid_cols;
            const std::size_t gap_c = (c1 - c0) >= 3 ? std::max<std::size_t>(1, (c1 - c0) / 6) : 0;
            ++label;
            const Spectrum s = draw_spectrum(rng, spec);
            for (std::size_t b = 0; b < spec.bands; ++b) {
                const float v = clamp_value(s.at(b), spec.value_scale);
                for (std::size_t r = r0 + gap_r; r < r1 - gap_r; ++r) {
                    for (std::size_t c = c0 + gap_c; c < c1 - gap_c; ++c) {
                        cube.set(r, c, b, v);
                        if (b == 0) scene.regions[r * spec.cols + c] = label;
                    }
                }
            }
        }
    }
}

struct Blob {
    double row = 0.0;
    double col = 0.0;
    double major = 1.0;
    double minor = 1.0;
    double cos_t = 1.0;
    double sin_t = 0.0;
    Spectrum spectrum;

    /// Compact smooth profile (1 - d^2)^2 inside the ellipse, 0 outside.
    [[nodiscard]] double weight(double r, double c) const {
        const double dr = r - row;
        const double dc = c - col;
        const double u = (dc * cos_t + dr * sin_t) / major;
        const double v = (-dc * sin_t + dr * cos_t) / minor;
        const double d2 = u * u + v * v;
        if (d2 >= 1.0) return 0.0;
        const double t = 1.0 - d2;
        return t * t;
    }
};

void fill_blobs(const SceneSpec& spec, Engine& rng, Scene& scene) {
    if (spec.min_blobs == 0 || spec.max_blobs < spec.min_blobs) {
        throw DimensionError("blob count range is empty");
    }
    const auto n = spec.min_blobs + detail::uniform_index(rng, spec.max_blobs - spec.min_blobs + 1);
    const double extent = static_cast<double>(std::min(spec.rows, spec.cols));
    std::vector<Blob> blobs(n);
    for (auto& blob : blobs) {
        blob.row = detail::uniform(rng, 0.1, 0.9) * static_cast<double>(spec.rows);
        blob.col = detail::uniform(rng, 0.1, 0.9) * static_cast<double>(spec.cols);
        blob.major = detail::uniform(rng, 0.15, 0.45) * extent;
        blob.minor = std::max(1.5, detail::uniform(rng, 0.05, 0.15) * extent);
        const double angle = detail::uniform(rng, 0.0, std::numbers::pi);
        blob.cos_t = std::cos(angle);
        blob.sin_t = std::sin(angle);
        blob.spectrum = draw_spectrum(rng, spec);
    }

    const double background = spec.background_level * spec.value_scale / HyperCube::kDefaultScale;
    std::vector<double> w(n);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            std::uint32_t label = 0;
            double best = 0.1;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] = blobs[i].weight(static_cast<double>(r), static_cast<double>(c));
                if (w[i] > best) {
                    best = w[i];
                    label = static_cast<std::uint32_t>(i + 1);
                }
            }
            scene.regions[r * spec.cols + c] = label;
            for (std::size_t b = 0; b < spec.bands; ++b) {
                double v = background;
                for (std::size_t i = 0; i < n; ++i) v += w[i] * blobs[i].spectrum.at(b);
                scene.cube.set(r, c, b, clamp_value(v, spec.value_scale));
            }
        }
    }
}

}  // namespace

std::string_view to_string(SceneKind kind) noexcept {
    switch (kind) {
        case SceneKind::mosaic: return "mosaic";
        case SceneKind::blobs: return "blobs";
        case SceneKind::blank: return "blank";
    }
    return "?";
}

SceneKind scene_kind_from_string(std::string_view name) {
    if (name == "mosaic") return SceneKind::mosaic;
    if (name == "blobs") return SceneKind::blobs;
    if (name == "blank") return SceneKind::blank;
    throw ConfigError("unknown scene kind '" + std::string(name) + "'");
}

Scene generate_scene_with_regions(const SceneSpec& spec) {
    if (spec.rows < 8 || spec.cols < 8 || spec.bands < 1) {
        throw DimensionError("scene dims must be at least 8x8x1, got " + std::to_string(spec.rows) + "x" +
                             std::to_string(spec.cols) + "x" + std::to_string(spec.bands));
    }
    if (!(spec.value_scale > 0.0f) || !std::isfinite(spec.value_scale)) {
        throw DimensionError("scene value scale must be positive");
    }
    Scene scene{HyperCube(spec.rows, spec.cols, spec.bands, spec.value_scale),
                std::vector<std::uint32_t>(spec.rows * spec.cols, 0)};
    Engine rng(spec.seed);
    switch (spec.kind) {
        case SceneKind::mosaic: fill_mosaic(spec, rng, scene); break;
        case SceneKind::blobs: fill_blobs(spec, rng, scene); break;
        case SceneKind::blank: break;
    }
    return scene;
}

HyperCube generate_scene(const SceneSpec& spec) { return generate_scene_with_regions(spec).cube; }

}  // namespace ctis
