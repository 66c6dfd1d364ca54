#ifndef WDC_WINOGRAD_HPP
#define WDC_WINOGRAD_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wdc/core.hpp"
#include "wdc/tdc.hpp"

// F(2x2, 3x3) minimal filtering with TDC integration. Filters move to the Winograd
// domain once per layer (U = G f G^T); input tiles are transformed (V = B^T Z B),
// reordered into n^2 x N matrices, combined element-wise with zero-row skipping, and
// inverse-transformed (A^T [.] A) with structurally zero terms dropped.

namespace wdc {

inline constexpr int kWinoOut = 2;     // m: output tile edge
inline constexpr int kWinoTaps = 3;    // r: filter taps per dimension
inline constexpr int kWinoIn = 4;      // n = m + r - 1: input tile edge

// Transform constants. The kernels below hard-code the same coefficients as
// add/half-structured expressions, which are exact in binary floating point.
inline constexpr double kWinoBT[4][4] = {{1, 0, -1, 0}, {0, 1, 1, 0}, {0, -1, 1, 0}, {0, 1, 0, -1}};
inline constexpr double kWinoG[4][3] = {{1, 0, 0}, {0.5, 0.5, 0.5}, {0.5, -0.5, 0.5}, {0, 0, 1}};
inline constexpr double kWinoAT[2][4] = {{1, 1, 1, 0}, {0, 1, -1, -1}};

template <typename T>
using FilterTile = std::array<T, 9>;   // 3x3 row-major
template <typename T>
using WinoTile = std::array<T, 16>;    // 4x4 row-major
template <typename T>
using OutTile = std::array<T, 4>;      // 2x2 row-major

/// U = G f G^T.
template <typename T>
WinoTile<T> transform_filter(const FilterTile<T>& f) {
    // rows: G f  (4x3)
    T t[4][3];
    for (int j = 0; j < 3; ++j) {
        T f0 = f[j], f1 = f[3 + j], f2 = f[6 + j];
        t[0][j] = f0;
        t[1][j] = T(0.5) * (f0 + f1 + f2);
        t[2][j] = T(0.5) * (f0 - f1 + f2);
        t[3][j] = f2;
    }
    // cols: (G f) G^T  (4x4)
    WinoTile<T> u;
    for (int i = 0; i < 4; ++i) {
        T t0 = t[i][0], t1 = t[i][1], t2 = t[i][2];
        u[4 * i + 0] = t0;
        u[4 * i + 1] = T(0.5) * (t0 + t1 + t2);
        u[4 * i + 2] = T(0.5) * (t0 - t1 + t2);
        u[4 * i + 3] = t2;
    }
    return u;
}

/// V = B^T Z B.
template <typename T>
WinoTile<T> transform_input(const WinoTile<T>& z) {
    T t[4][4];
    for (int j = 0; j < 4; ++j) {
        T z0 = z[j], z1 = z[4 + j], z2 = z[8 + j], z3 = z[12 + j];
        t[0][j] = z0 - z2;
        t[1][j] = z1 + z2;
        t[2][j] = z2 - z1;
        t[3][j] = z1 - z3;
    }
    WinoTile<T> v;
    for (int i = 0; i < 4; ++i) {
        T t0 = t[i][0], t1 = t[i][1], t2 = t[i][2], t3 = t[i][3];
        v[4 * i + 0] = t0 - t2;
        v[4 * i + 1] = t1 + t2;
        v[4 * i + 2] = t2 - t1;
        v[4 * i + 3] = t1 - t3;
    }
    return v;
}

enum class SparsityCase { kCase1 = 1, kCase2 = 2, kCase3 = 3 };

inline const char* to_string(SparsityCase c) {
    switch (c) {
        case SparsityCase::kCase1: return "case1";
        case SparsityCase::kCase2: return "case2";
        default: return "case3";
    }
}

/// Structurally zero rows/columns of a transformed filter, shared by all channels.
struct SparsityInfo {
    SparsityCase label = SparsityCase::kCase1;
    std::array<bool, 4> zero_rows{};
    std::array<bool, 4> zero_cols{};

    int zero_line_count() const {
        int c = 0;
        for (bool b : zero_rows) c += b;
        for (bool b : zero_cols) c += b;
        return c;
    }
    /// Number of structurally zero positions in the 4x4 tile.
    int zero_position_count() const {
        int r = 0, c = 0;
        for (bool b : zero_rows) r += b;
        for (bool b : zero_cols) c += b;
        return 4 * r + 4 * c - r * c;
    }
    int live_position_count() const { return 16 - zero_position_count(); }
    bool position_is_zero(int pos) const { return zero_rows[pos / 4] || zero_cols[pos % 4]; }

    /// Reordered-matrix rows (Winograd positions) that are entirely zero.
    std::vector<int> zero_positions() const {
        std::vector<int> out;
        for (int pos = 0; pos < 16; ++pos)
            if (position_is_zero(pos)) out.push_back(pos);
        return out;
    }
};

/// Pads a K_C x K_C support mask to 3x3, bottom-right.
inline std::array<bool, 9> pad_mask_to_3x3(const SubFilterMask& mask, int k_c) {
    if (k_c > 3) throw UnsupportedError("sub-filter mask wider than 3 taps");
    std::array<bool, 9> out{};
    for (int k = 0; k < k_c; ++k)
        for (int l = 0; l < k_c; ++l) out[3 * k + l] = mask.at(k, l, k_c);
    return out;
}

/// Classifies the structural sparsity of G f G^T from the filter's 3x3 support mask.
/// Only G's first and last rows select a single filter row, so U row 0 (3) is zero
/// exactly when mask row 0 (2) is empty; columns mirror this through G^T.
inline SparsityInfo classify_sparsity(const std::array<bool, 9>& mask) {
    auto row_empty = [&](int r) { return !mask[3 * r] && !mask[3 * r + 1] && !mask[3 * r + 2]; };
    auto col_empty = [&](int c) { return !mask[c] && !mask[3 + c] && !mask[6 + c]; };
    SparsityInfo info;
    info.zero_rows[0] = row_empty(0);
    info.zero_rows[3] = row_empty(2);
    info.zero_cols[0] = col_empty(0);
    info.zero_cols[3] = col_empty(2);
    int lines = info.zero_line_count();
    info.label = lines == 0   ? SparsityCase::kCase1
                 : lines == 1 ? SparsityCase::kCase2
                              : SparsityCase::kCase3;
    return info;
}

/// Sparsity of the S^2 sub-filters of a (K_D, S) kernel, indexed (a,b) = a*S+b.
inline std::vector<SparsityInfo> classify_layer_sparsity(int k_d, int stride) {
    if (k_d > 3 * stride)
        throw UnsupportedError("Winograd TDC path requires K_D <= 3S (got K_D=" +
                               std::to_string(k_d) + ", S=" + std::to_string(stride) + ")");
    const int k_c = (k_d + stride - 1) / stride;
    std::vector<SparsityInfo> out;
    for (const SubFilterMask& m : sub_filter_masks(k_d, stride))
        out.push_back(classify_sparsity(pad_mask_to_3x3(m, k_c)));
    return out;
}

/// Live element-wise multiplications per mS x mS output block, summed over the S^2
/// sub-filters (per input channel). 49 for K_D=5,S=2; 36 for K_D=4,S=2.
inline std::uint64_t live_mults_per_block(int k_d, int stride) {
    std::uint64_t live = 0;
    for (const SparsityInfo& info : classify_layer_sparsity(k_d, stride))
        live += static_cast<std::uint64_t>(info.live_position_count());
    return live;
}

/// Element-wise multiplications of the sparse Winograd route, counting
/// ceil(H_I/m) x ceil(W_I/m) tiles per channel pair and the live positions of all
/// S^2 sub-filters per tile.
inline std::uint64_t count_mults_winograd(const LayerConfig& layer) {
    const std::uint64_t tiles_h = (layer.h_in + kWinoOut - 1) / kWinoOut;
    const std::uint64_t tiles_w = (layer.w_in + kWinoOut - 1) / kWinoOut;
    return live_mults_per_block(layer.k_d, layer.stride) *
           static_cast<std::uint64_t>(layer.in_maps) * layer.out_maps * tiles_h * tiles_w;
}

/// Transformed filters of a whole layer plus their shared sparsity descriptors.
template <typename T>
struct WinogradFilterSet {
    int out_maps = 0;
    int in_maps = 0;
    int s = 1;
    int k_c = 1;
    std::vector<SparsityInfo> sparsity;  // per (a,b)
    std::vector<WinoTile<T>> u;          // [((m*N)+n)*S^2 + a*S+b]

    const WinoTile<T>& at(int m, int n, int a, int b) const {
        return u[(static_cast<std::size_t>(m) * in_maps + n) * (s * s) + a * s + b];
    }
};

template <typename T>
WinogradFilterSet<T> transform_filters(const DecomposedFilters<T>& filters) {
    if (filters.k_c > 3)
        throw UnsupportedError("Winograd TDC path requires K_C <= 3 sub-filters");
    WinogradFilterSet<T> set;
    set.out_maps = filters.out_maps;
    set.in_maps = filters.in_maps;
    set.s = filters.s;
    set.k_c = filters.k_c;
    const int s2 = filters.s * filters.s;
    for (int ab = 0; ab < s2; ++ab)
        set.sparsity.push_back(
            classify_sparsity(pad_mask_to_3x3(filters.sets[0].masks[ab], filters.k_c)));
    set.u.reserve(static_cast<std::size_t>(filters.out_maps) * filters.in_maps * s2);
    for (int m = 0; m < filters.out_maps; ++m)
        for (int n = 0; n < filters.in_maps; ++n) {
            const SubFilterSet<T>& sub = filters.at(m, n);
            for (int ab = 0; ab < s2; ++ab) {
                FilterTile<T> padded{};
                for (int k = 0; k < filters.k_c; ++k)
                    for (int l = 0; l < filters.k_c; ++l)
                        padded[3 * k + l] = sub.weights[ab][static_cast<std::size_t>(k) * filters.k_c + l];
                set.u.push_back(transform_filter(padded));
            }
        }
    return set;
}

/// One sub-filter type reorganized as M matrices of shape n^2 x N
/// (row = Winograd position, column = input channel).
template <typename T>
struct ReorderedFilters {
    int out_maps = 0;
    int in_maps = 0;
    SparsityInfo sparsity;
    std::vector<T> data;  // [m][pos][ch]

    const T* matrix(int m) const { return data.data() + static_cast<std::size_t>(m) * 16 * in_maps; }
};

template <typename T>
ReorderedFilters<T> reorder_filters(const WinogradFilterSet<T>& set, int a, int b) {
    ReorderedFilters<T> out;
    out.out_maps = set.out_maps;
    out.in_maps = set.in_maps;
    out.sparsity = set.sparsity[a * set.s + b];
    out.data.resize(static_cast<std::size_t>(set.out_maps) * 16 * set.in_maps);
    for (int m = 0; m < set.out_maps; ++m)
        for (int pos = 0; pos < 16; ++pos)
            for (int n = 0; n < set.in_maps; ++n)
                out.data[(static_cast<std::size_t>(m) * 16 + pos) * set.in_maps + n] =
                    set.at(m, n, a, b)[pos];
    return out;
}

/// Tile-grid geometry of the converted convolution: tiles of m x m output blocks
/// covering exactly the block range the cropped output needs.
struct TileGrid {
    int rows = 0, cols = 0;
    int block_row0 = 0, block_col0 = 0;  // first block index covered

    int count() const { return rows * cols; }
};

inline TileGrid tile_grid_for(const LayerConfig& layer) {
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int s = layer.stride;
    TileGrid g;
    g.block_row0 = layer.pad / s;
    g.block_col0 = layer.pad / s;
    int blocks_h = (layer.pad + h_out + s - 1) / s - g.block_row0;
    int blocks_w = (layer.pad + w_out + s - 1) / s - g.block_col0;
    g.rows = (blocks_h + kWinoOut - 1) / kWinoOut;
    g.cols = (blocks_w + kWinoOut - 1) / kWinoOut;
    return g;
}

/// All transformed input tiles of one layer, reordered as n^2 x N matrices
/// (row = Winograd position, column = input channel). Neighboring tiles overlap by
/// (n-m) = 2 input rows/columns.
template <typename T>
struct TransformedInputMatrix {
    TileGrid grid;
    int in_maps = 0;
    std::vector<T> data;  // [tile][pos][ch]

    const T* matrix(int tile) const {
        return data.data() + static_cast<std::size_t>(tile) * 16 * in_maps;
    }
};

/// Transforms and reorders every input tile; one B^T Z B per tile per channel, shared
/// by all S^2 sub-filter types. The TDC sub-problems are convolutions while F(2x2,3x3)
/// computes correlation, so each window is reversed (180 degrees) before the
/// transform and tile outputs are emitted order-reversed.
template <typename T>
TransformedInputMatrix<T> transform_and_reorder_inputs(const FeatureMap<T>& x,
                                                       const TileGrid& grid,
                                                       std::uint64_t* input_transforms = nullptr) {
    TransformedInputMatrix<T> out;
    out.grid = grid;
    out.in_maps = x.channels;
    out.data.resize(static_cast<std::size_t>(grid.count()) * 16 * x.channels);
    std::uint64_t transforms = 0;
    for (int tr = 0; tr < grid.rows; ++tr) {
        for (int tc = 0; tc < grid.cols; ++tc) {
            const int tile = tr * grid.cols + tc;
            const int u0 = grid.block_row0 + kWinoOut * tr;
            const int v0 = grid.block_col0 + kWinoOut * tc;
            for (int n = 0; n < x.channels; ++n) {
                WinoTile<T> z{};
                for (int i = 0; i < 4; ++i) {
                    int yy = u0 + 1 - i;  // reversed window
                    if (yy < 0 || yy >= x.height) continue;
                    for (int j = 0; j < 4; ++j) {
                        int xx = v0 + 1 - j;
                        if (xx < 0 || xx >= x.width) continue;
                        z[4 * i + j] = x.at(n, yy, xx);
                    }
                }
                WinoTile<T> v = transform_input(z);
                ++transforms;
                for (int pos = 0; pos < 16; ++pos)
                    out.data[(static_cast<std::size_t>(tile) * 16 + pos) * x.channels + n] = v[pos];
            }
        }
    }
    if (input_transforms) *input_transforms += transforms;
    return out;
}

namespace detail {

// Shared inverse-transform core: A^T Yhat A with optional skipping of structurally
// zero rows/columns. Dense and sparse paths run the same accumulation loop, so their
// results are bit-identical.
template <typename T>
OutTile<T> inverse_transform_impl(const WinoTile<T>& y, const SparsityInfo* skip) {
    // stage 1: w = A^T y  (2x4); A^T rows are [1,1,1,0] and [0,1,-1,-1]
    T w0[4], w1[4];
    for (int j = 0; j < 4; ++j) {
        T a0 = T(0), a1 = T(0);
        if (!skip || !skip->zero_rows[0]) a0 += y[j];
        if (!skip || !skip->zero_rows[1]) {
            a0 += y[4 + j];
            a1 += y[4 + j];
        }
        if (!skip || !skip->zero_rows[2]) {
            a0 += y[8 + j];
            a1 -= y[8 + j];
        }
        if (!skip || !skip->zero_rows[3]) a1 -= y[12 + j];
        w0[j] = a0;
        w1[j] = a1;
    }
    // stage 2: (A^T y) A  (2x2)
    OutTile<T> out{};
    const T* rows[2] = {w0, w1};
    for (int i = 0; i < 2; ++i) {
        const T* w = rows[i];
        T b0 = T(0), b1 = T(0);
        if (!skip || !skip->zero_cols[0]) b0 += w[0];
        if (!skip || !skip->zero_cols[1]) {
            b0 += w[1];
            b1 += w[1];
        }
        if (!skip || !skip->zero_cols[2]) {
            b0 += w[2];
            b1 -= w[2];
        }
        if (!skip || !skip->zero_cols[3]) b1 -= w[3];
        out[2 * i + 0] = b0;
        out[2 * i + 1] = b1;
    }
    return out;
}

}  // namespace detail

/// Y = A^T Yhat A.
template <typename T>
OutTile<T> inverse_transform(const WinoTile<T>& y) {
    return detail::inverse_transform_impl<T>(y, nullptr);
}

template <typename T>
struct SparseInverseResult {
    OutTile<T> tile{};
    int skipped_term_count = 0;
};

/// Inverse transform that skips the structurally zero positions; identical values to
/// the dense route.
template <typename T>
SparseInverseResult<T> sparse_inverse_transform(const WinoTile<T>& y, const SparsityInfo& info) {
    return {detail::inverse_transform_impl<T>(y, &info), info.zero_position_count()};
}

template <typename T>
struct MacResult {
    // Accumulated element-wise products: [tile][m][pos], pos in 0..15.
    std::vector<T> y_hat;
    std::uint64_t mult_count = 0;
};

/// Row-wise multiply-accumulate of reordered inputs and filters over all channels.
/// With skip, rows on zero lines are neither multiplied nor accumulated; values are
/// unchanged because the skipped products are exact zeros.
template <typename T>
MacResult<T> sparse_multiply_accumulate(const TransformedInputMatrix<T>& inputs,
                                        const ReorderedFilters<T>& filters, bool skip) {
    if (inputs.in_maps != filters.in_maps)
        throw ConfigError("sparse_multiply_accumulate: channel count mismatch");
    const int tiles = inputs.grid.count();
    const int n_ch = inputs.in_maps;
    MacResult<T> out;
    out.y_hat.assign(static_cast<std::size_t>(tiles) * filters.out_maps * 16, T(0));
    const int live = filters.sparsity.live_position_count();
    for (int t = 0; t < tiles; ++t) {
        const T* v = inputs.matrix(t);
        for (int m = 0; m < filters.out_maps; ++m) {
            const T* u = filters.matrix(m);
            T* acc = out.y_hat.data() + (static_cast<std::size_t>(t) * filters.out_maps + m) * 16;
            for (int pos = 0; pos < 16; ++pos) {
                if (skip && filters.sparsity.position_is_zero(pos)) continue;
                T sum = T(0);
                const T* urow = u + static_cast<std::size_t>(pos) * n_ch;
                const T* vrow = v + static_cast<std::size_t>(pos) * n_ch;
                for (int n = 0; n < n_ch; ++n) sum += urow[n] * vrow[n];
                acc[pos] = sum;
            }
        }
    }
    out.mult_count = static_cast<std::uint64_t>(tiles) * filters.out_maps * n_ch *
                     (skip ? live : 16);
    return out;
}

struct WinogradCounters {
    std::uint64_t mults = 0;                  // element-wise products performed
    std::uint64_t skipped_rows = 0;           // zero matrix rows skipped in the MAC stage
    std::uint64_t skipped_inverse_terms = 0;  // zero positions dropped from A^T [.] A
    std::uint64_t tiles = 0;                  // input tiles in the grid
    std::uint64_t input_transforms = 0;       // B^T Z B evaluations (once per tile per channel)
};

template <typename T>
struct WinogradDeconvResult {
    FeatureMap<T> output;
    WinogradCounters counters;
    std::vector<SparsityInfo> sub_filter_sparsity;  // per (a,b)
};

/// Full Winograd-TDC transposed convolution: decompose, transform filters once, tile
/// and transform inputs, multiply-accumulate over channels with zero-row skipping,
/// sparse inverse transform, then interleave the S^2 sub-outputs into mS x mS output
/// blocks and crop. Equals standard_deconv.
template <typename T>
WinogradDeconvResult<T> winograd_tdc_deconv(const FeatureMap<T>& x, const FilterBank<T>& w,
                                            const LayerConfig& layer, bool skip = true) {
    check_layer_operands(x, w, layer);
    if (layer.k_d > 3 * layer.stride)
        throw UnsupportedError("Winograd TDC path requires K_D <= 3S (got K_D=" +
                               std::to_string(layer.k_d) + ", S=" +
                               std::to_string(layer.stride) + ")");
    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int s = layer.stride;

    WinogradDeconvResult<T> result;
    result.output = FeatureMap<T>(layer.out_maps, h_out, w_out);

    WinogradFilterSet<T> filters = transform_filters(decompose(w, s));
    result.sub_filter_sparsity = filters.sparsity;

    const TileGrid grid = tile_grid_for(layer);
    result.counters.tiles = static_cast<std::uint64_t>(grid.count());
    TransformedInputMatrix<T> inputs =
        transform_and_reorder_inputs(x, grid, &result.counters.input_transforms);

    for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
            ReorderedFilters<T> bank = reorder_filters(filters, a, b);
            MacResult<T> mac = sparse_multiply_accumulate(inputs, bank, skip);
            result.counters.mults += mac.mult_count;
            if (skip)
                result.counters.skipped_rows +=
                    static_cast<std::uint64_t>(grid.count()) * layer.out_maps *
                    bank.sparsity.zero_position_count();

            for (int t = 0; t < grid.count(); ++t) {
                const int tr = t / grid.cols;
                const int tc = t % grid.cols;
                const int u0 = grid.block_row0 + kWinoOut * tr;
                const int v0 = grid.block_col0 + kWinoOut * tc;
                for (int m = 0; m < layer.out_maps; ++m) {
                    WinoTile<T> y_hat;
                    const T* src =
                        mac.y_hat.data() + (static_cast<std::size_t>(t) * layer.out_maps + m) * 16;
                    for (int pos = 0; pos < 16; ++pos) y_hat[pos] = src[pos];

                    OutTile<T> tile;
                    if (skip) {
                        auto inv = sparse_inverse_transform(y_hat, bank.sparsity);
                        tile = inv.tile;
                        result.counters.skipped_inverse_terms +=
                            static_cast<std::uint64_t>(inv.skipped_term_count);
                    } else {
                        tile = inverse_transform(y_hat);
                    }

                    // Tile outputs are order-reversed (reversed input windows).
                    for (int du = 0; du < 2; ++du) {
                        int p = s * (u0 + du) + a - layer.pad;
                        if (p < 0 || p >= h_out) continue;
                        for (int dv = 0; dv < 2; ++dv) {
                            int q = s * (v0 + dv) + b - layer.pad;
                            if (q < 0 || q >= w_out) continue;
                            result.output.at(m, p, q) = tile[2 * (1 - du) + (1 - dv)];
                        }
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace wdc

#endif  // WDC_WINOGRAD_HPP
