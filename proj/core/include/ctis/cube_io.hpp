#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "ctis/hypercube.hpp"

namespace ctis {

// HSC1 container:
//   bytes 0-3   magic "HSC1"
//   bytes 4-15  uint32 LE x (cols), y (rows), b (bands)
//   bytes 16-   x*y*b float32 LE, band-slowest, row-major per band

inline constexpr std::size_t kHsc1HeaderBytes = 16;

/// Largest voxel count accepted from a header (guards against absurd dims
/// before any allocation happens).
inline constexpr std::uint64_t kMaxVoxels = std::uint64_t{1} << 34;

void write_cube(const HyperCube& cube, const std::filesystem::path& path);
[[nodiscard]] HyperCube read_cube(const std::filesystem::path& path);

/// Stream variants used by the record formats. `base_offset` is the byte
/// position of the frame inside the enclosing file and only feeds error
/// messages.
void write_cube(const HyperCube& cube, std::ostream& out);
[[nodiscard]] HyperCube read_cube(std::istream& in, std::uint64_t base_offset = 0);

/// Encoded size of a cube frame.
[[nodiscard]] std::uint64_t frame_bytes(const HyperCube& cube) noexcept;

/// 16-bit binary PGM of one band, linearly scaled so `max_value` maps to 65535.
/// A non-positive `max_value` uses the band maximum.
void write_pgm16(const HyperCube& cube, std::size_t band, const std::filesystem::path& path, float max_value = 0.0f);

}  // namespace ctis
