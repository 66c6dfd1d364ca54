#ifndef WDC_TENSOR_IO_HPP
#define WDC_TENSOR_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "wdc/core.hpp"

// Binary tensor container:
//   16-byte header: magic "WDCV", u32 version, u32 dtype (1 = f32, 2 = f64), u32 rank,
//   then rank little-endian u64 dims, then little-endian row-major samples.

namespace wdc {

inline constexpr std::uint32_t kTensorFormatVersion = 1;

template <typename T>
constexpr std::uint32_t dtype_code() {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>,
                  "samples must be float or double");
    return std::is_same_v<T, float> ? 1u : 2u;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

inline std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

template <typename T>
void put_sample(std::string& out, T v) {
    if constexpr (std::is_same_v<T, float>) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    } else {
        put_u64(out, std::bit_cast<std::uint64_t>(v));
    }
}

template <typename T>
T get_sample(const unsigned char* p) {
    if constexpr (std::is_same_v<T, float>) {
        return std::bit_cast<float>(get_u32(p));
    } else {
        return std::bit_cast<double>(get_u64(p));
    }
}

template <typename T>
std::string encode_tensor(const std::vector<std::uint64_t>& dims, const std::vector<T>& samples) {
    std::string out;
    out.reserve(16 + 8 * dims.size() + sizeof(T) * samples.size());
    out += "WDCV";
    put_u32(out, kTensorFormatVersion);
    put_u32(out, dtype_code<T>());
    put_u32(out, static_cast<std::uint32_t>(dims.size()));
    for (std::uint64_t d : dims) put_u64(out, d);
    for (T v : samples) put_sample(out, v);
    return out;
}

struct DecodedTensor {
    std::vector<std::uint64_t> dims;
    std::size_t payload_offset = 0;
};

template <typename T>
DecodedTensor decode_header(const std::string& bytes, const std::string& origin,
                            std::uint32_t expected_rank) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 16) throw ParseError("truncated tensor header", origin + ":0");
    if (std::memcmp(bytes.data(), "WDCV", 4) != 0)
        throw ParseError("bad magic, expected WDCV", origin + ":0");
    std::uint32_t version = get_u32(p + 4);
    if (version != kTensorFormatVersion)
        throw ParseError("unsupported tensor format version " + std::to_string(version),
                         origin + ":4");
    std::uint32_t dtype = get_u32(p + 8);
    if (dtype != dtype_code<T>())
        throw ParseError("dtype code " + std::to_string(dtype) + " does not match requested type",
                         origin + ":8");
    std::uint32_t rank = get_u32(p + 12);
    if (rank != expected_rank)
        throw ParseError("rank " + std::to_string(rank) + ", expected " +
                             std::to_string(expected_rank),
                         origin + ":12");
    if (bytes.size() < 16 + 8ull * rank)
        throw ParseError("truncated dimension list", origin + ":16");
    DecodedTensor t;
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
        std::uint64_t d = get_u64(p + 16 + 8 * i);
        if (d == 0) throw ParseError("zero dimension", origin + ":" + std::to_string(16 + 8 * i));
        t.dims.push_back(d);
        total *= d;
    }
    t.payload_offset = 16 + 8ull * rank;
    if (bytes.size() != t.payload_offset + sizeof(T) * total)
        throw ParseError("payload size mismatch", origin + ":" + std::to_string(t.payload_offset));
    return t;
}

template <typename T>
std::vector<T> decode_payload(const std::string& bytes, std::size_t offset, std::size_t count) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + offset;
    std::vector<T> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = get_sample<T>(p + sizeof(T) * i);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file", path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

}  // namespace detail

template <typename T>
void save_tensor(const std::string& path, const FeatureMap<T>& x) {
    detail::write_file(path, detail::encode_tensor<T>(
                                 {static_cast<std::uint64_t>(x.channels),
                                  static_cast<std::uint64_t>(x.height),
                                  static_cast<std::uint64_t>(x.width)},
                                 x.data));
}

template <typename T>
void save_tensor(const std::string& path, const FilterBank<T>& w) {
    detail::write_file(path, detail::encode_tensor<T>(
                                 {static_cast<std::uint64_t>(w.out_maps),
                                  static_cast<std::uint64_t>(w.in_maps),
                                  static_cast<std::uint64_t>(w.k),
                                  static_cast<std::uint64_t>(w.k)},
                                 w.data));
}

template <typename T>
FeatureMap<T> load_feature_map(const std::string& path) {
    std::string bytes = detail::read_file(path);
    auto hdr = detail::decode_header<T>(bytes, path, 3);
    FeatureMap<T> x(static_cast<int>(hdr.dims[0]), static_cast<int>(hdr.dims[1]),
                    static_cast<int>(hdr.dims[2]));
    x.data = detail::decode_payload<T>(bytes, hdr.payload_offset, x.size());
    return x;
}

template <typename T>
FilterBank<T> load_filter_bank(const std::string& path) {
    std::string bytes = detail::read_file(path);
    auto hdr = detail::decode_header<T>(bytes, path, 4);
    if (hdr.dims[2] != hdr.dims[3])
        throw ParseError("filter bank kernel must be square", path);
    FilterBank<T> w(static_cast<int>(hdr.dims[0]), static_cast<int>(hdr.dims[1]),
                    static_cast<int>(hdr.dims[2]));
    w.data = detail::decode_payload<T>(bytes, hdr.payload_offset, w.size());
    return w;
}

// Seeded, platform-independent uniform samples in [-1, 1). mt19937_64 raw draws are
// mapped to doubles directly; std::uniform_real_distribution is not portable.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : rng_(seed) {}

    double next() {
        std::uint64_t bits = rng_() >> 11;  // 53 random bits
        return 2.0 * (static_cast<double>(bits) * 0x1.0p-53) - 1.0;
    }

private:
    std::mt19937_64 rng_;
};

template <typename T>
FeatureMap<T> random_feature_map(int channels, int height, int width, std::uint64_t seed) {
    FeatureMap<T> x(channels, height, width);
    SeededUniform u(seed);
    for (auto& v : x.data) v = static_cast<T>(u.next());
    return x;
}

template <typename T>
FilterBank<T> random_filter_bank(int out_maps, int in_maps, int k_d, std::uint64_t seed) {
    FilterBank<T> w(out_maps, in_maps, k_d);
    SeededUniform u(seed);
    for (auto& v : w.data) v = static_cast<T>(u.next());
    return w;
}

}  // namespace wdc

#endif  // WDC_TENSOR_IO_HPP
