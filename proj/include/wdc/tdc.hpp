#ifndef WDC_TDC_HPP
#define WDC_TDC_HPP

#include <cstdint>
#include <vector>

#include "wdc/core.hpp"

// DeConv-to-Conv conversion: one stride-S transposed convolution becomes S^2 small
// convolutions whose outputs interleave into S x S blocks. Sub-filter (a,b) holds
// taps w[S*k+a][S*l+b], stored zero-padded to K_C x K_C with an explicit support mask.

namespace wdc {

struct SubFilterMask {
    int rows_eff = 0;  // ceil((K_D - a) / S)
    int cols_eff = 0;  // ceil((K_D - b) / S)
    std::vector<std::uint8_t> bits;  // K_C x K_C, row-major

    bool at(int k, int l, int k_c) const { return bits[static_cast<std::size_t>(k) * k_c + l] != 0; }
    int popcount() const {
        int c = 0;
        for (auto b : bits) c += b ? 1 : 0;
        return c;
    }
};

/// Structural support masks of the S^2 sub-filters, independent of weight values.
/// Index (a,b) as a * S + b.
inline std::vector<SubFilterMask> sub_filter_masks(int k_d, int stride) {
    if (k_d < 1 || stride < 1) throw ConfigError("sub_filter_masks: bad kernel/stride");
    const int k_c = (k_d + stride - 1) / stride;
    std::vector<SubFilterMask> masks;
    masks.reserve(static_cast<std::size_t>(stride) * stride);
    for (int a = 0; a < stride; ++a)
        for (int b = 0; b < stride; ++b) {
            SubFilterMask m;
            m.rows_eff = k_d - a > 0 ? (k_d - a + stride - 1) / stride : 0;
            m.cols_eff = k_d - b > 0 ? (k_d - b + stride - 1) / stride : 0;
            m.bits.assign(static_cast<std::size_t>(k_c) * k_c, 0);
            for (int k = 0; k < k_c; ++k)
                for (int l = 0; l < k_c; ++l)
                    if (stride * k + a < k_d && stride * l + b < k_d)
                        m.bits[static_cast<std::size_t>(k) * k_c + l] = 1;
            masks.push_back(std::move(m));
        }
    return masks;
}

/// The S^2 sub-filters of one (out_map, in_map) kernel.
template <typename T>
struct SubFilterSet {
    int s = 1;
    int k_c = 1;
    std::vector<SubFilterMask> masks;   // S^2 entries, (a,b) = a*S+b
    std::vector<std::vector<T>> weights;  // per (a,b): K_C x K_C row-major, zero off-mask

    const T& weight(int a, int b, int k, int l) const {
        return weights[static_cast<std::size_t>(a) * s + b]
                      [static_cast<std::size_t>(k) * k_c + l];
    }
};

/// g_{a,b}[k,l] = w[S*k+a][S*l+b] for in-range taps, zero elsewhere.
template <typename T>
SubFilterSet<T> decompose_kernel(const T* kernel, int k_d, int stride) {
    SubFilterSet<T> set;
    set.s = stride;
    set.k_c = (k_d + stride - 1) / stride;
    set.masks = sub_filter_masks(k_d, stride);
    set.weights.resize(static_cast<std::size_t>(stride) * stride);
    for (int a = 0; a < stride; ++a)
        for (int b = 0; b < stride; ++b) {
            auto& g = set.weights[static_cast<std::size_t>(a) * stride + b];
            g.assign(static_cast<std::size_t>(set.k_c) * set.k_c, T(0));
            for (int k = 0; k < set.k_c; ++k)
                for (int l = 0; l < set.k_c; ++l) {
                    int i = stride * k + a;
                    int j = stride * l + b;
                    if (i < k_d && j < k_d)
                        g[static_cast<std::size_t>(k) * set.k_c + l] =
                            kernel[static_cast<std::size_t>(i) * k_d + j];
                }
        }
    return set;
}

/// Per-(m,n) decomposition of a whole filter bank.
template <typename T>
struct DecomposedFilters {
    int out_maps = 0;
    int in_maps = 0;
    int s = 1;
    int k_c = 1;
    std::vector<SubFilterSet<T>> sets;  // (m,n) = m*in_maps + n

    const SubFilterSet<T>& at(int m, int n) const {
        return sets[static_cast<std::size_t>(m) * in_maps + n];
    }
};

template <typename T>
DecomposedFilters<T> decompose(const FilterBank<T>& w, int stride) {
    if (stride < 1) throw ConfigError("decompose: stride must be >= 1");
    DecomposedFilters<T> d;
    d.out_maps = w.out_maps;
    d.in_maps = w.in_maps;
    d.s = stride;
    d.k_c = (w.k + stride - 1) / stride;
    d.sets.reserve(static_cast<std::size_t>(w.out_maps) * w.in_maps);
    for (int m = 0; m < w.out_maps; ++m)
        for (int n = 0; n < w.in_maps; ++n)
            d.sets.push_back(decompose_kernel(&w.at(m, n, 0, 0), w.k, stride));
    return d;
}

struct TdcExecCounters {
    std::uint64_t dense_mults = 0;   // K_C^2 taps per emitted output pixel
    std::uint64_t masked_mults = 0;  // mask-true taps per emitted output pixel
};

/// Runs the S^2 sub-convolutions and interleaves their outputs into S x S blocks:
///   y[S*u+a - pad, S*v+b - pad] = sum_n sum_{k,l} g_{a,b}[k,l] * x_n[u-k, v-l],
/// with the input zero-padded by K_C-1 on the leading edges and the interleaved
/// map cropped by pad/out_pad. Equals standard_deconv.
template <typename T>
FeatureMap<T> tdc_deconv(const FeatureMap<T>& x, const FilterBank<T>& w,
                         const LayerConfig& layer, TdcExecCounters* counters = nullptr) {
    check_layer_operands(x, w, layer);
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int s = layer.stride;
    const int k_c = layer.k_c();
    const int blocks_h = layer.h_in + k_c - 1;
    const int blocks_w = layer.w_in + k_c - 1;

    DecomposedFilters<T> filters = decompose(w, s);
    FeatureMap<T> y(layer.out_maps, h_out, w_out);
    std::uint64_t dense = 0, masked = 0;
    for (int m = 0; m < layer.out_maps; ++m) {
        for (int a = 0; a < s; ++a) {
            for (int b = 0; b < s; ++b) {
                const SubFilterMask& mask = filters.at(m, 0).masks[a * s + b];
                const int mask_bits = mask.popcount();
                for (int u = 0; u < blocks_h; ++u) {
                    int p = s * u + a - layer.pad;
                    if (p < 0 || p >= h_out) continue;
                    for (int v = 0; v < blocks_w; ++v) {
                        int q = s * v + b - layer.pad;
                        if (q < 0 || q >= w_out) continue;
                        T acc = T(0);
                        for (int n = 0; n < layer.in_maps; ++n) {
                            const SubFilterSet<T>& set = filters.at(m, n);
                            for (int k = 0; k < k_c; ++k) {
                                int i = u - k;
                                if (i < 0 || i >= layer.h_in) continue;
                                for (int l = 0; l < k_c; ++l) {
                                    int j = v - l;
                                    if (j < 0 || j >= layer.w_in) continue;
                                    acc += set.weight(a, b, k, l) * x.at(n, i, j);
                                }
                            }
                        }
                        y.at(m, p, q) = acc;
                        dense += static_cast<std::uint64_t>(layer.in_maps) * k_c * k_c;
                        masked += static_cast<std::uint64_t>(layer.in_maps) * mask_bits;
                    }
                }
            }
        }
    }
    if (counters) {
        counters->dense_mults = dense;
        counters->masked_mults = masked;
    }
    return y;
}

/// Dense: N*M*S^2*K_C^2*H_I*W_I (K_C^2 per output pixel). With zero-weight skipping
/// the S^2 masks together hold exactly K_D^2 taps, so the count collapses to the
/// standard-DeConv value.
inline std::uint64_t count_mults_tdc(const LayerConfig& layer, bool skip_zero_weights = false) {
    layer.validate();
    const std::uint64_t maps = static_cast<std::uint64_t>(layer.in_maps) * layer.out_maps;
    const std::uint64_t pixels = static_cast<std::uint64_t>(layer.h_in) * layer.w_in;
    if (skip_zero_weights)
        return maps * layer.k_d * layer.k_d * pixels;
    const std::uint64_t k_c = static_cast<std::uint64_t>(layer.k_c());
    return maps * layer.stride * layer.stride * k_c * k_c * pixels;
}

}  // namespace wdc

#endif  // WDC_TDC_HPP
