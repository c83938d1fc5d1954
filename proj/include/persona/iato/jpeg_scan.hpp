#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "persona/core/feature_matrix.hpp"
#include "persona/error.hpp"

namespace persona::iato {

/// JPEG marker codes (second byte after 0xFF).
namespace marker {
inline constexpr std::uint8_t SOI = 0xD8;
inline constexpr std::uint8_t EOI = 0xD9;
inline constexpr std::uint8_t SOF0 = 0xC0;  // baseline DCT
inline constexpr std::uint8_t SOF2 = 0xC2;  // progressive DCT
inline constexpr std::uint8_t DHT = 0xC4;
inline constexpr std::uint8_t DQT = 0xDB;
inline constexpr std::uint8_t SOS = 0xDA;
inline constexpr std::uint8_t COM = 0xFE;
inline constexpr std::uint8_t TEM = 0x01;
}  // namespace marker

/// Frame header summary laid out in 18 slots:
/// width, height, component count, then 5 x (component id, h-sampling, v-sampling).
/// Unused slots, and the whole block when no frame header exists, are zero.
struct FrameInfo {
    static constexpr std::size_t kSlots = 18;
    static constexpr std::size_t kMaxComponents = 5;
    std::array<double, kSlots> slots{};

    double width() const { return slots[0]; }
    double height() const { return slots[1]; }
    double component_count() const { return slots[2]; }
};

/// How segment markers are located.
enum class MarkerMatching {
    /// Walk segments using their length fields and skip entropy-coded data,
    /// so stuffed FF 00 bytes and payload contents never count as markers.
    Structural,
    /// Count every occurrence of the two-byte marker pattern anywhere in the
    /// stream. Kept for compatibility with naive byte-sequence matchers.
    PatternCount,
};

struct ScanOptions {
    MarkerMatching matching = MarkerMatching::Structural;
    /// When false, a segment overrunning the end of the stream or a missing
    /// marker where one is required is an error instead of a warning.
    bool lenient = true;
};

/// Non-fatal anomalies met while walking the stream.
struct ScanWarnings {
    bool trailing_data = false;      // bytes after EOI
    bool missing_eoi = false;        // stream ended without EOI
    bool malformed = false;          // desync or a segment running past the end
    std::optional<std::size_t> first_anomaly_offset;

    bool any() const { return trailing_data || missing_eoi || malformed; }
};

struct MarkerScan {
    bool baseline_present = false;
    bool progressive_present = false;
    std::size_t comment_count = 0;
    std::size_t huffman_table_count = 0;
    std::size_t quantization_table_count = 0;
    FrameInfo frame_info;
    std::size_t filler_count = 0;  // number of 0x00 bytes
    /// byte_freq[b - 1] = count(b) / total_bytes for b in 0x01..0xFF.
    std::array<double, 255> byte_freq{};
    std::size_t total_bytes = 0;
    ScanWarnings warnings;
};

/// Raised for a stream that does not begin with FF D8.
class MissingSoiError : public DataError {
public:
    MissingSoiError() : DataError("not a JPEG stream: missing SOI marker (FF D8)") {}
};

/// Raised when a segment's two-byte length field (or, in strict mode, its
/// payload) is cut off by the end of the stream.
class TruncatedSegmentError : public DataError {
public:
    explicit TruncatedSegmentError(std::size_t offset, const std::string& what)
        : DataError(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

MarkerScan scan_markers(std::span<const std::uint8_t> bytes, const ScanOptions& options = {});

/// The 280-value byte-level descriptor, in this order:
/// baseline(1) progressive(1) comments(1) huffman(1) quantization(1)
/// frame_info(18) fillers(1) byte_freq 0x01..0xFF(255) total_bytes(1).
std::vector<double> iato_vector(const MarkerScan& scan);

std::vector<double> extract_iato(std::span<const std::uint8_t> bytes, const ScanOptions& options = {});

}  // namespace persona::iato
