#include "persona/core/feature_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "persona/error.hpp"
#include "persona/util/text.hpp"

namespace persona {
namespace {

constexpr char kMagic[8] = {'P', 'F', 'S', 'T', 'O', 'R', 'E', '\0'};

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    template <typename U>
    void uint(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void str(std::string_view s) {
        uint<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    void f64(double v) { uint<std::uint64_t>(std::bit_cast<std::uint64_t>(v)); }
    std::string& buffer() { return out_; }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}

    void need(std::size_t n, const char* what) const {
        if (in_.size() - pos_ < n)
            throw DataError("feature store truncated while reading " + std::string(what) + " at byte " +
                            std::to_string(pos_));
    }
    template <typename U>
    U uint(const char* what) {
        need(sizeof(U), what);
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            v |= static_cast<U>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        pos_ += sizeof(U);
        return v;
    }
    std::string str(const char* what) {
        const auto n = uint<std::uint32_t>(what);
        need(n, what);
        std::string s(in_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    double f64(const char* what) { return std::bit_cast<double>(uint<std::uint64_t>(what)); }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

bool is_family_tag(StoreTag t) { return static_cast<std::uint8_t>(t) <= 3; }

void check_shape(const StoreContents& c) {
    if (c.ids.empty()) throw DataError("feature store is empty (stores must hold at least one row)");
    if (c.dim == 0) throw DataError("feature store dimension is zero");
    if (c.values.size() != c.ids.size() * c.dim)
        throw DataError("feature store dimension mismatch: " + std::to_string(c.values.size()) + " values for " +
                        std::to_string(c.ids.size()) + " rows of declared dim " + std::to_string(c.dim));
    if (is_family_tag(c.tag)) {
        const auto expected = family_dim(static_cast<FeatureFamily>(c.tag));
        if (c.dim != expected)
            throw DataError("feature store dimension mismatch: family " +
                            std::string(family_name(static_cast<FeatureFamily>(c.tag))) + " requires dim " +
                            std::to_string(expected) + ", file declares " + std::to_string(c.dim));
    }
}

}  // namespace

std::string encode_store(const StoreContents& c) {
    check_shape(c);
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.uint<std::uint32_t>(kStoreVersion);
    w.uint<std::uint8_t>(static_cast<std::uint8_t>(c.tag));
    w.uint<std::uint32_t>(c.dim);
    w.uint<std::uint64_t>(c.ids.size());
    w.uint<std::uint64_t>(c.values.size());
    w.uint<std::uint32_t>(static_cast<std::uint32_t>(c.metadata.size()));
    for (const auto& [k, v] : c.metadata) {
        w.str(k);
        w.str(v);
    }
    for (const auto& id : c.ids) w.str(id);
    for (double v : c.values) w.f64(v);
    const auto sum = fnv1a(w.buffer());
    w.uint<std::uint64_t>(sum);
    return std::move(w.buffer());
}

StoreContents decode_store(std::string_view bytes) {
    Reader r(bytes);
    r.need(sizeof kMagic, "magic");
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw DataError("not a feature store (bad magic)");
    for (std::size_t i = 0; i < sizeof kMagic; ++i) r.uint<std::uint8_t>("magic");
    const auto version = r.uint<std::uint32_t>("version");
    if (version != kStoreVersion) throw DataError("unsupported feature store version " + std::to_string(version));

    StoreContents c;
    const auto tag = r.uint<std::uint8_t>("family tag");
    if (tag > 3 && tag != static_cast<std::uint8_t>(StoreTag::Vocabulary))
        throw DataError("unknown feature store tag " + std::to_string(tag));
    c.tag = static_cast<StoreTag>(tag);
    c.dim = r.uint<std::uint32_t>("dim");
    const auto rows = r.uint<std::uint64_t>("row count");
    const auto value_count = r.uint<std::uint64_t>("value count");
    const auto meta = r.uint<std::uint32_t>("metadata count");
    for (std::uint32_t i = 0; i < meta; ++i) {
        auto k = r.str("metadata key");
        c.metadata[std::move(k)] = r.str("metadata value");
    }
    // Guard the allocations below against absurd headers before reserving.
    if (rows > r.remaining() / 4) throw DataError("feature store truncated: header declares " + std::to_string(rows) + " rows");
    c.ids.reserve(rows);
    for (std::uint64_t i = 0; i < rows; ++i) c.ids.push_back(r.str("id table"));
    if (value_count != rows * c.dim)
        throw DataError("feature store dimension mismatch: " + std::to_string(value_count) + " values for " +
                        std::to_string(rows) + " rows of declared dim " + std::to_string(c.dim));
    r.need(value_count * 8, "values");
    c.values.reserve(value_count);
    for (std::uint64_t i = 0; i < value_count; ++i) c.values.push_back(r.f64("values"));
    const auto payload_end = r.pos();
    const auto stored_sum = r.uint<std::uint64_t>("checksum");
    if (stored_sum != fnv1a(bytes.substr(0, payload_end))) throw DataError("feature store checksum mismatch");
    if (r.remaining() != 0) throw DataError("feature store has trailing bytes");
    check_shape(c);
    return c;
}

void write_store(const StoreContents& contents, const std::filesystem::path& path) {
    util::write_file(path.string(), encode_store(contents));
}

StoreContents read_store(const std::filesystem::path& path) { return decode_store(util::read_file(path.string())); }

StoreContents to_contents(const FeatureMatrix& m) {
    StoreContents c;
    c.tag = static_cast<StoreTag>(m.family());
    c.dim = static_cast<std::uint32_t>(m.dim());
    c.ids = m.ids();
    c.values = m.data();
    return c;
}

FeatureMatrix to_matrix(const StoreContents& c) {
    if (!is_family_tag(c.tag)) throw DataError("store does not hold a feature family (tag " +
                                               std::to_string(static_cast<int>(c.tag)) + ")");
    check_shape(c);
    FeatureMatrix m(static_cast<FeatureFamily>(c.tag));
    for (std::size_t i = 0; i < c.ids.size(); ++i)
        m.add_row(c.ids[i], std::span<const double>(c.values).subspan(i * c.dim, c.dim));
    return m;
}

void write_feature_store(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    write_store(to_contents(matrix), path);
}

FeatureMatrix read_feature_store(const std::filesystem::path& path) { return to_matrix(read_store(path)); }

}  // namespace persona
