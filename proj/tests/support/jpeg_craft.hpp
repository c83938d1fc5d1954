#pragma once

// Hand-built JPEG streams with known segment counts.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace persona::testkit {

using Bytes = std::vector<std::uint8_t>;

inline void append(Bytes& b, std::initializer_list<int> v) {
    for (int x : v) b.push_back(static_cast<std::uint8_t>(x));
}

inline void segment(Bytes& b, int marker, const Bytes& payload) {
    const std::size_t len = payload.size() + 2;
    append(b, {0xFF, marker, static_cast<int>(len >> 8), static_cast<int>(len & 0xFF)});
    b.insert(b.end(), payload.begin(), payload.end());
}

inline Bytes dqt() {
    Bytes p{0x00};
    for (int i = 0; i < 64; ++i) p.push_back(static_cast<std::uint8_t>(1 + i));
    return p;
}

inline Bytes dht() {
    Bytes p{0x00};
    for (int i = 0; i < 16; ++i) p.push_back(i == 1 ? 12 : 0);
    for (int i = 0; i < 12; ++i) p.push_back(static_cast<std::uint8_t>(i));
    return p;
}

inline Bytes sof(int h, int w) {
    return {0x08, static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(w >> 8),
            static_cast<std::uint8_t>(w), 0x03, 0x01, 0x22, 0x00, 0x02, 0x11, 0x01, 0x03, 0x11, 0x01};
}

inline Bytes sos() { return {0x03, 0x01, 0x00, 0x02, 0x11, 0x03, 0x11, 0x00, 0x3F, 0x00}; }

// Entropy-coded data with a stuffed FF 00, a restart marker and a fill byte.
inline void scan_data(Bytes& b) { append(b, {0x12, 0xFF, 0x00, 0x34, 0xFF, 0xD0, 0x56, 0xFF, 0xFF, 0x00, 0x78}); }

inline Bytes minimal_baseline(int sof_marker = 0xC0) {
    Bytes b;
    append(b, {0xFF, 0xD8});
    segment(b, 0xDB, dqt());
    segment(b, sof_marker, sof(16, 32));
    segment(b, 0xC4, dht());
    segment(b, 0xDA, sos());
    scan_data(b);
    append(b, {0xFF, 0xD9});
    return b;
}

inline std::array<std::size_t, 256> histogram(const Bytes& b) {
    std::array<std::size_t, 256> h{};
    for (auto v : b) ++h[v];
    return h;
}

}  // namespace persona::testkit
