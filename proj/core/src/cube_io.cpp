#include "ctis/cube_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "ctis/detail/binary.hpp"
#include "ctis/error.hpp"

namespace ctis {
namespace {

constexpr std::array<char, 4> kMagic{'H', 'S', 'C', '1'};

}  // namespace

std::uint64_t frame_bytes(const HyperCube& cube) noexcept { return kHsc1HeaderBytes + 4ULL * cube.size(); }

void write_cube(const HyperCube& cube, std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    detail::put_le(out, static_cast<std::uint32_t>(cube.cols()));
    detail::put_le(out, static_cast<std::uint32_t>(cube.rows()));
    detail::put_le(out, static_cast<std::uint32_t>(cube.bands()));
    if constexpr (std::endian::native == std::endian::little) {
        const auto data = cube.data();
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
    } else {
        for (float v : cube.data()) detail::put_f32(out, v);
    }
}

HyperCube read_cube(std::istream& in, std::uint64_t base_offset) {
    std::array<unsigned char, kHsc1HeaderBytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    const auto got = static_cast<std::uint64_t>(in.gcount());
    if (got >= 4 && std::memcmp(header.data(), kMagic.data(), 4) != 0) {
        throw FormatError("bad magic, expected HSC1", base_offset);
    }
    if (got != kHsc1HeaderBytes) {
        throw FormatError("truncated header: expected " + std::to_string(kHsc1HeaderBytes) + " bytes, got " +
                              std::to_string(got),
                          base_offset + got);
    }
    const auto x = detail::decode_le<std::uint32_t>(header.data() + 4);
    const auto y = detail::decode_le<std::uint32_t>(header.data() + 8);
    const auto b = detail::decode_le<std::uint32_t>(header.data() + 12);
    if (x == 0 || y == 0 || b == 0) {
        throw FormatError("zero dimension in header", base_offset + 4);
    }
    const std::uint64_t n = std::uint64_t{x} * y * b;
    if (std::uint64_t{x} * y > kMaxVoxels || n > kMaxVoxels) {
        throw FormatError("dims " + std::to_string(x) + "x" + std::to_string(y) + "x" + std::to_string(b) +
                              " exceed the voxel limit",
                          base_offset + 4);
    }

    std::vector<float> data(n);
    const auto want = static_cast<std::streamsize>(n * 4);
    in.read(reinterpret_cast<char*>(data.data()), want);
    const auto have = in.gcount();
    if (have != want) {
        throw FormatError("truncated payload: expected " + std::to_string(want) + " bytes, got " +
                              std::to_string(have),
                          base_offset + kHsc1HeaderBytes + static_cast<std::uint64_t>(have));
    }
    if constexpr (std::endian::native != std::endian::little) {
        for (auto& v : data) {
            const auto* p = reinterpret_cast<const unsigned char*>(&v);
            v = std::bit_cast<float>(detail::decode_le<std::uint32_t>(p));
        }
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i]) || data[i] < 0.0f) {
            throw FormatError("negative or non-finite value", base_offset + kHsc1HeaderBytes + 4 * i);
        }
    }
    return {y, x, b, std::move(data)};
}

void write_cube(const HyperCube& cube, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_cube(cube, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

HyperCube read_cube(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    auto cube = read_cube(in, 0);
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("trailing bytes after cube payload in " + path.string(), frame_bytes(cube));
    }
    return cube;
}

void write_pgm16(const HyperCube& cube, std::size_t band, const std::filesystem::path& path, float max_value) {
    if (band >= cube.bands()) throw IndexError("band " + std::to_string(band) + " out of range");
    const auto plane = cube.plane(band);
    float peak = max_value;
    if (peak <= 0.0f) peak = plane.empty() ? 0.0f : *std::max_element(plane.begin(), plane.end());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P5\n" << cube.cols() << ' ' << cube.rows() << "\n65535\n";
    for (float v : plane) {
        const double scaled = peak > 0.0f ? std::clamp(v / peak, 0.0f, 1.0f) * 65535.0 : 0.0;
        const auto px = static_cast<std::uint16_t>(std::lround(scaled));
        const char bytes[2] = {static_cast<char>(px >> 8), static_cast<char>(px & 0xFF)};  // PGM is big-endian
        out.write(bytes, 2);
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ctis
