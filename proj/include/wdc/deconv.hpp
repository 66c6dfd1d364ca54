#ifndef WDC_DECONV_HPP
#define WDC_DECONV_HPP

#include <cstdint>
#include <vector>

#include "wdc/core.hpp"

// Ground-truth transposed-convolution implementations. Both accumulate each output
// sample in channel-major, kernel-row-major term order, so 64-bit results are
// reproducible and the two routes agree term for term.

namespace wdc {

struct DeconvExecCounters {
    std::uint64_t mults = 0;           // in-range taps accumulated (standard path)
    std::uint64_t window_mults = 0;    // all window taps, zero insertions included
    std::uint64_t real_tap_mults = 0;  // window taps whose activation is a real input pixel
};

/// Direct transposed convolution:
///   y_m[p,q] = sum_n sum_{ki,kj} x_n[(p+pad-ki)/S, (q+pad-kj)/S] * w[m][n][ki][kj]
/// over taps where the division is exact and in range. Overlapping block
/// contributions accumulate.
template <typename T>
FeatureMap<T> standard_deconv(const FeatureMap<T>& x, const FilterBank<T>& w,
                              const LayerConfig& layer, DeconvExecCounters* counters = nullptr) {
    check_layer_operands(x, w, layer);
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int s = layer.stride;
    const int kd = layer.k_d;

    FeatureMap<T> y(layer.out_maps, h_out, w_out);
    std::uint64_t taps = 0;
    for (int m = 0; m < layer.out_maps; ++m) {
        for (int p = 0; p < h_out; ++p) {
            for (int q = 0; q < w_out; ++q) {
                T acc = T(0);
                for (int n = 0; n < layer.in_maps; ++n) {
                    for (int ki = 0; ki < kd; ++ki) {
                        int num_i = p + layer.pad - ki;
                        if (num_i < 0 || num_i % s != 0) continue;
                        int i = num_i / s;
                        if (i >= layer.h_in) continue;
                        for (int kj = 0; kj < kd; ++kj) {
                            int num_j = q + layer.pad - kj;
                            if (num_j < 0 || num_j % s != 0) continue;
                            int j = num_j / s;
                            if (j >= layer.w_in) continue;
                            acc += x.at(n, i, j) * w.at(m, n, ki, kj);
                            ++taps;
                        }
                    }
                }
                y.at(m, p, q) = acc;
            }
        }
    }
    if (counters) counters->mults = taps;
    return y;
}

/// Zero-insertion route: upsample by S (S-1 zeros between pixels), border-pad by
/// K_D-1-pad plus out_pad on the trailing edges, then correlate with the
/// 180-degree-rotated kernel. Same term order as standard_deconv.
template <typename T>
FeatureMap<T> zero_padded_deconv(const FeatureMap<T>& x, const FilterBank<T>& w,
                                 const LayerConfig& layer,
                                 DeconvExecCounters* counters = nullptr) {
    check_layer_operands(x, w, layer);
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int s = layer.stride;
    const int kd = layer.k_d;
    const int border = kd - 1 - layer.pad;

    // Upsampled-and-padded extent; trailing edge also absorbs out_pad.
    const int up_h = s * (layer.h_in - 1) + 1 + 2 * border + layer.out_pad;
    const int up_w = s * (layer.w_in - 1) + 1 + 2 * border + layer.out_pad;

    std::vector<T> up(static_cast<std::size_t>(layer.in_maps) * up_h * up_w, T(0));
    std::vector<std::uint8_t> real(static_cast<std::size_t>(up_h) * up_w, 0);
    auto up_at = [&](int n, int r, int c) -> T& {
        return up[(static_cast<std::size_t>(n) * up_h + r) * up_w + c];
    };
    for (int n = 0; n < layer.in_maps; ++n)
        for (int i = 0; i < layer.h_in; ++i)
            for (int j = 0; j < layer.w_in; ++j) {
                int r = s * i + border;
                int c = s * j + border;
                up_at(n, r, c) = x.at(n, i, j);
                real[static_cast<std::size_t>(r) * up_w + c] = 1;
            }

    FeatureMap<T> y(layer.out_maps, h_out, w_out);
    std::uint64_t window_taps = 0, real_taps = 0;
    for (int m = 0; m < layer.out_maps; ++m) {
        for (int p = 0; p < h_out; ++p) {
            for (int q = 0; q < w_out; ++q) {
                T acc = T(0);
                for (int n = 0; n < layer.in_maps; ++n) {
                    for (int ki = 0; ki < kd; ++ki) {
                        // Rotated-kernel correlation: tap offset kd-1-ki pairs with w[ki].
                        int r = p + kd - 1 - ki;
                        for (int kj = 0; kj < kd; ++kj) {
                            int c = q + kd - 1 - kj;
                            acc += up_at(n, r, c) * w.at(m, n, ki, kj);
                            ++window_taps;
                            if (real[static_cast<std::size_t>(r) * up_w + c]) ++real_taps;
                        }
                    }
                }
                y.at(m, p, q) = acc;
            }
        }
    }
    if (counters) {
        counters->window_mults = window_taps;
        counters->real_tap_mults = real_taps;
    }
    return y;
}

/// N * M * K_D^2 * H_I * W_I: every input pixel expanded through the full kernel.
inline std::uint64_t count_mults_standard(const LayerConfig& layer) {
    layer.validate();
    return static_cast<std::uint64_t>(layer.in_maps) * layer.out_maps * layer.k_d * layer.k_d *
           layer.h_in * layer.w_in;
}

/// Without skipping, every output pixel costs a full K_D^2 window over N channels.
/// With skip_zero_activations, only taps landing on real (non-inserted) input pixels
/// count; the per-dimension tap census is separable.
inline std::uint64_t count_mults_zero_padded(const LayerConfig& layer,
                                             bool skip_zero_activations = false) {
    layer.validate();
    const std::uint64_t maps =
        static_cast<std::uint64_t>(layer.in_maps) * layer.out_maps;
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    if (!skip_zero_activations)
        return maps * layer.k_d * layer.k_d * h_out * w_out;

    auto live_taps = [&](int out, int in) {
        std::uint64_t total = 0;
        for (int p = 0; p < out; ++p)
            for (int ki = 0; ki < layer.k_d; ++ki) {
                int num = p + layer.pad - ki;
                if (num >= 0 && num % layer.stride == 0 && num / layer.stride < in) ++total;
            }
        return total;
    };
    return maps * live_taps(h_out, layer.h_in) * live_taps(w_out, layer.w_in);
}

}  // namespace wdc

#endif  // WDC_DECONV_HPP
