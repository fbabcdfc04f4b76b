#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ctis/hypercube.hpp"

namespace ctis {

enum class SceneKind : std::uint8_t { mosaic, blobs, blank };

[[nodiscard]] std::string_view to_string(SceneKind kind) noexcept;
/// Throws ConfigError on an unknown name.
[[nodiscard]] SceneKind scene_kind_from_string(std::string_view name);

/// Recipe for a synthetic scene standing in for a measured cube.
///
/// `mosaic` tiles a grid of flat rectangles on a dim background, each with its
/// own smooth spectrum (a ColorChecker-like chart). `blobs` superimposes
/// smooth elongated ellipses (vegetable-like shapes). `blank` is all zeros.
struct SceneSpec {
    SceneKind kind = SceneKind::mosaic;
    std::uint64_t seed = 0;
    std::size_t rows = 100;
    std::size_t cols = 100;
    std::size_t bands = 5;
    float value_scale = HyperCube::kDefaultScale;

    std::size_t grid_rows = 4;
    std::size_t grid_cols = 6;

    std::size_t min_blobs = 3;
    std::size_t max_blobs = 8;

    /// Spectral profile of each region: baseline plus a Gaussian bump whose
    /// center, width and height are drawn per region. Widths are in bands.
    float min_peak_width = 0.5f;
    float max_peak_width = 3.0f;
    float background_level = 12.0f;

    friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

/// Generated cube plus the per-pixel region label the generator used
/// (0 = background, 1.. = rectangle or blob id; for blobs the label is the
/// dominant blob).
struct Scene {
    HyperCube cube;
    std::vector<std::uint32_t> regions;
};

/// Deterministic in `spec`. Throws DimensionError below 8 x 8 x 1.
[[nodiscard]] Scene generate_scene_with_regions(const SceneSpec& spec);
[[nodiscard]] HyperCube generate_scene(const SceneSpec& spec);

}  // namespace ctis
