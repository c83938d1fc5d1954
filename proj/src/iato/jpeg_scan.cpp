#include "persona/iato/jpeg_scan.hpp"

#include <algorithm>
#include <string>

namespace persona::iato {
namespace {

std::string marker_name(std::uint8_t m) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    return std::string("FF ") + kHex[m >> 4] + kHex[m & 0x0F];
}

bool is_sof(std::uint8_t m) {
    return m >= 0xC0 && m <= 0xCF && m != marker::DHT && m != 0xC8 && m != 0xCC;
}

bool is_standalone(std::uint8_t m) {
    return m == marker::TEM || (m >= 0xD0 && m <= 0xD7) || m == marker::SOI || m == marker::EOI;
}

std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t pos) {
    return static_cast<std::uint16_t>((b[pos] << 8) | b[pos + 1]);
}

/// Fills frame info from a SOFn payload starting at `pos` (just after the
/// length field). Reads only what is present.
void read_frame(std::span<const std::uint8_t> b, std::size_t pos, std::size_t end, FrameInfo& info) {
    // precision(1) height(2) width(2) Nf(1) then Nf x (id, HV, Tq)
    if (pos + 6 > end) return;
    info.slots[1] = be16(b, pos + 1);
    info.slots[0] = be16(b, pos + 3);
    const std::size_t nf = b[pos + 5];
    info.slots[2] = static_cast<double>(nf);
    std::size_t c = pos + 6;
    for (std::size_t k = 0; k < std::min(nf, FrameInfo::kMaxComponents) && c + 3 <= end; ++k, c += 3) {
        info.slots[3 + 3 * k] = b[c];
        info.slots[4 + 3 * k] = b[c + 1] >> 4;
        info.slots[5 + 3 * k] = b[c + 1] & 0x0F;
    }
}

void count_segment(std::uint8_t m, MarkerScan& scan) {
    switch (m) {
        case marker::SOF0: scan.baseline_present = true; break;
        case marker::SOF2: scan.progressive_present = true; break;
        case marker::COM: ++scan.comment_count; break;
        case marker::DHT: ++scan.huffman_table_count; break;
        case marker::DQT: ++scan.quantization_table_count; break;
        default: break;
    }
}

void note_anomaly(ScanWarnings& w, std::size_t offset) {
    if (!w.first_anomaly_offset) w.first_anomaly_offset = offset;
}

void walk_structural(std::span<const std::uint8_t> b, const ScanOptions& opt, MarkerScan& scan) {
    const std::size_t n = b.size();
    std::size_t pos = 2;
    bool frame_seen = false;
    bool in_scan = false;  // inside entropy-coded data after SOS

    while (pos < n) {
        if (in_scan) {
            // Entropy-coded data: FF 00 is a stuffed byte, FF D0-D7 restart
            // markers, FF FF fill; anything else ends the scan.
            if (b[pos] != 0xFF) { ++pos; continue; }
            if (pos + 1 >= n) { ++pos; break; }
            const auto next = b[pos + 1];
            if (next == 0x00 || (next >= 0xD0 && next <= 0xD7)) { pos += 2; continue; }
            if (next == 0xFF) { ++pos; continue; }
            in_scan = false;
            continue;  // pos sits on the marker's 0xFF
        }

        if (b[pos] != 0xFF) {
            if (!opt.lenient) throw DataError("expected a marker at byte offset " + std::to_string(pos));
            scan.warnings.malformed = true;
            note_anomaly(scan.warnings, pos);
            while (pos < n && b[pos] != 0xFF) ++pos;
            continue;
        }
        // Skip fill bytes preceding the marker code.
        while (pos + 1 < n && b[pos + 1] == 0xFF) ++pos;
        if (pos + 1 >= n) { ++pos; break; }
        const std::uint8_t m = b[pos + 1];
        const std::size_t marker_at = pos;
        pos += 2;

        if (m == marker::EOI) {
            if (pos < n) {
                scan.warnings.trailing_data = true;
                note_anomaly(scan.warnings, pos);
            }
            return;
        }
        if (is_standalone(m) || m == 0x00) continue;

        if (pos + 2 > n)
            throw TruncatedSegmentError(pos, "truncated length field of marker " + marker_name(m));
        const std::size_t len = be16(b, pos);
        const bool overrun = len < 2 || pos + len > n;
        if (overrun) {
            if (!opt.lenient) throw TruncatedSegmentError(marker_at, "segment runs past the end of the stream");
            scan.warnings.malformed = true;
            note_anomaly(scan.warnings, marker_at);
        }
        count_segment(m, scan);
        const std::size_t payload = pos + 2;
        const std::size_t end = std::min(n, pos + std::max<std::size_t>(len, 2));
        if (is_sof(m) && !frame_seen) {
            read_frame(b, payload, end, scan.frame_info);
            frame_seen = true;
        }
        if (overrun) return;
        pos += len;
        if (m == marker::SOS) in_scan = true;
    }
    scan.warnings.missing_eoi = true;
    note_anomaly(scan.warnings, n);
}

void walk_patterns(std::span<const std::uint8_t> b, MarkerScan& scan) {
    bool frame_seen = false;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        if (b[i] != 0xFF) continue;
        const auto m = b[i + 1];
        count_segment(m, scan);
        if (is_sof(m) && !frame_seen && i + 4 <= b.size()) {
            read_frame(b, i + 4, b.size(), scan.frame_info);
            frame_seen = true;
        }
    }
    const bool ends_with_eoi = b.size() >= 4 && b[b.size() - 2] == 0xFF && b[b.size() - 1] == marker::EOI;
    if (!ends_with_eoi) scan.warnings.missing_eoi = true;
}

}  // namespace

MarkerScan scan_markers(std::span<const std::uint8_t> bytes, const ScanOptions& options) {
    if (bytes.size() < 2 || bytes[0] != 0xFF || bytes[1] != marker::SOI) throw MissingSoiError();

    MarkerScan scan;
    scan.total_bytes = bytes.size();
    std::array<std::size_t, 256> hist{};
    for (auto v : bytes) ++hist[v];
    scan.filler_count = hist[0];
    const auto total = static_cast<double>(bytes.size());
    for (std::size_t v = 1; v < 256; ++v) scan.byte_freq[v - 1] = static_cast<double>(hist[v]) / total;

    if (options.matching == MarkerMatching::Structural)
        walk_structural(bytes, options, scan);
    else
        walk_patterns(bytes, scan);
    return scan;
}

std::vector<double> iato_vector(const MarkerScan& scan) {
    std::vector<double> v;
    v.reserve(kIatoDim);
    v.push_back(scan.baseline_present ? 1.0 : 0.0);
    v.push_back(scan.progressive_present ? 1.0 : 0.0);
    v.push_back(static_cast<double>(scan.comment_count));
    v.push_back(static_cast<double>(scan.huffman_table_count));
    v.push_back(static_cast<double>(scan.quantization_table_count));
    v.insert(v.end(), scan.frame_info.slots.begin(), scan.frame_info.slots.end());
    v.push_back(static_cast<double>(scan.filler_count));
    v.insert(v.end(), scan.byte_freq.begin(), scan.byte_freq.end());
    v.push_back(static_cast<double>(scan.total_bytes));
    if (v.size() != kIatoDim) throw InvariantError("IATO vector has " + std::to_string(v.size()) + " entries");
    return v;
}

std::vector<double> extract_iato(std::span<const std::uint8_t> bytes, const ScanOptions& options) {
    return iato_vector(scan_markers(bytes, options));
}

}  // namespace persona::iato
