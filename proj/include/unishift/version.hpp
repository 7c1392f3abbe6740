#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace unishift {

inline constexpr std::string_view kToolVersion = "unishift 0.1.0";

// FNV-1a, used to stamp output files with a hash of the config they came from.
inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace unishift
