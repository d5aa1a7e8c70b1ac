#pragma once

// Little-endian primitives for the Gram and dataset file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "lptk/error.hpp"

namespace lptk::detail {

inline std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
}

inline std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    }
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
    v = to_le(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    v = to_le(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_f64(std::ostream& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void put_f64s(std::ostream& out, std::span<const double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size_bytes()));
    } else {
        for (double v : values) put_f64(out, v);
    }
}

inline void get_exact(std::istream& in, void* dst, std::size_t bytes, const char* what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) {
        throw FormatError(std::string("truncated file while reading ") + what);
    }
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
    std::uint32_t v;
    get_exact(in, &v, sizeof v, what);
    return to_le(v);
}

inline std::uint64_t get_u64(std::istream& in, const char* what) {
    std::uint64_t v;
    get_exact(in, &v, sizeof v, what);
    return to_le(v);
}

inline double get_f64(std::istream& in, const char* what) {
    return std::bit_cast<double>(get_u64(in, what));
}

inline void get_f64s(std::istream& in, std::span<double> values, const char* what) {
    get_exact(in, values.data(), values.size_bytes(), what);
    if constexpr (std::endian::native != std::endian::little) {
        for (double& v : values) v = std::bit_cast<double>(to_le(std::bit_cast<std::uint64_t>(v)));
    }
}

} // namespace lptk::detail
