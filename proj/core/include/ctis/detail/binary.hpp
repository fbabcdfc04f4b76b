#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace ctis::detail {

// Little-endian encode/decode independent of host byte order.

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
    std::array<char, sizeof(UInt)> buf{};
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }
    out.write(buf.data(), buf.size());
}

template <typename UInt>
[[nodiscard]] UInt decode_le(const unsigned char* p) noexcept {
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        v |= static_cast<UInt>(p[i]) << (8 * i);
    }
    return v;
}

/// Reads exactly sizeof(UInt) bytes; returns false on short read.
template <typename UInt>
[[nodiscard]] bool get_le(std::istream& in, UInt& v) {
    std::array<unsigned char, sizeof(UInt)> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) return false;
    v = decode_le<UInt>(buf.data());
    return true;
}

inline void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }

}  // namespace ctis::detail
