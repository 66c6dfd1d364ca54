#include "doctest.h"

#include <array>
#include <cmath>

#include "wdc/deconv.hpp"
#include "wdc/tensor_io.hpp"
#include "wdc/winograd.hpp"

using namespace wdc;

namespace {

LayerConfig make_layer(int m, int n, int h, int w, int kd, int s, int pad, int opad) {
    LayerConfig layer;
    layer.out_maps = m;
    layer.in_maps = n;
    layer.h_in = h;
    layer.w_in = w;
    layer.k_d = kd;
    layer.stride = s;
    layer.pad = pad;
    layer.out_pad = opad;
    return layer;
}

// Matrix-product oracles evaluated straight from the published constants.
WinoTile<double> oracle_filter_transform(const FilterTile<double>& f) {
    double gf[4][3] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) gf[i][j] += kWinoG[i][k] * f[3 * k + j];
    WinoTile<double> u{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 3; ++k) u[4 * i + j] += gf[i][k] * kWinoG[j][k];
    return u;
}

WinoTile<double> oracle_input_transform(const WinoTile<double>& z) {
    double bz[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) bz[i][j] += kWinoBT[i][k] * z[4 * k + j];
    WinoTile<double> v{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) v[4 * i + j] += bz[i][k] * kWinoBT[j][k];
    return v;
}

OutTile<double> oracle_inverse_transform(const WinoTile<double>& y) {
    double ay[2][4] = {};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) ay[i][j] += kWinoAT[i][k] * y[4 * k + j];
    OutTile<double> out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 4; ++k) out[2 * i + j] += ay[i][k] * kWinoAT[j][k];
    return out;
}

// Direct 2x2-valid correlation of a 4x4 window with a 3x3 filter.
OutTile<double> valid_correlation(const WinoTile<double>& z, const FilterTile<double>& f) {
    OutTile<double> out{};
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
            double acc = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) acc += z[4 * (u + i) + (v + j)] * f[3 * i + j];
            out[2 * u + v] = acc;
        }
    return out;
}

double max_abs_diff(const FeatureMap<double>& a, const FeatureMap<double>& b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

}  // namespace

TEST_CASE("transform constants are the published matrices") {
    CHECK(kWinoBT[0][0] == 1.0);
    CHECK(kWinoBT[0][2] == -1.0);
    CHECK(kWinoBT[3][1] == 1.0);
    CHECK(kWinoBT[3][3] == -1.0);
    CHECK(kWinoG[1][0] == 0.5);
    CHECK(kWinoG[2][1] == -0.5);
    CHECK(kWinoG[3][2] == 1.0);
    CHECK(kWinoAT[0][3] == 0.0);
    CHECK(kWinoAT[1][2] == -1.0);
    CHECK(kWinoAT[1][3] == -1.0);
    CHECK(kWinoOut == 2);
    CHECK(kWinoTaps == 3);
    CHECK(kWinoIn == 4);
}

TEST_CASE("structured transforms equal matrix products") {
    SeededUniform rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        FilterTile<double> f;
        for (auto& v : f) v = rng.next();
        WinoTile<double> z;
        for (auto& v : z) v = rng.next();
        WinoTile<double> y;
        for (auto& v : y) v = rng.next();

        WinoTile<double> u = transform_filter(f);
        WinoTile<double> u_ref = oracle_filter_transform(f);
        for (int i = 0; i < 16; ++i) CHECK(u[i] == u_ref[i]);

        WinoTile<double> v = transform_input(z);
        WinoTile<double> v_ref = oracle_input_transform(z);
        for (int i = 0; i < 16; ++i) CHECK(v[i] == v_ref[i]);

        OutTile<double> o = inverse_transform(y);
        OutTile<double> o_ref = oracle_inverse_transform(y);
        for (int i = 0; i < 4; ++i) CHECK(o[i] == o_ref[i]);
    }
}

TEST_CASE("minimal filtering identity over 1000 random tiles") {
    SeededUniform rng(41);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        FilterTile<double> f;
        for (auto& v : f) v = rng.next();
        WinoTile<double> z;
        for (auto& v : z) v = rng.next();

        WinoTile<double> u = transform_filter(f);
        WinoTile<double> v = transform_input(z);
        WinoTile<double> hadamard;
        for (int i = 0; i < 16; ++i) hadamard[i] = u[i] * v[i];
        OutTile<double> got = inverse_transform(hadamard);
        OutTile<double> want = valid_correlation(z, f);
        for (int i = 0; i < 4; ++i) {
            double rel = std::abs(got[i] - want[i]) / std::max(1e-30, std::abs(want[i]));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("1d minimal filtering walkthrough") {
    // z = [1,2,3,4], filter x = [1,1,1]: m = (Gx) .* (B^T z), y = A^T m
    const double z[4] = {1, 2, 3, 4};
    const double f[3] = {1, 1, 1};
    double gx[4] = {}, bz[4] = {}, m[4], y[2] = {};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 3; ++k) gx[i] += kWinoG[i][k] * f[k];
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) bz[i] += kWinoBT[i][k] * z[k];
    for (int i = 0; i < 4; ++i) m[i] = gx[i] * bz[i];
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 4; ++k) y[i] += kWinoAT[i][k] * m[k];

    CHECK(m[0] == -2.0);
    CHECK(m[1] == 7.5);
    CHECK(m[2] == 0.5);
    CHECK(m[3] == -2.0);
    CHECK(y[0] == 6.0);
    CHECK(y[1] == 9.0);
}

TEST_CASE("sparsity taxonomy of transformed sub-filters") {
    SUBCASE("K_D=5, S=2: mixed cases") {
        auto infos = classify_layer_sparsity(5, 2);
        REQUIRE(infos.size() == 4);
        CHECK(infos[0].label == SparsityCase::kCase1);  // 3x3 support
        CHECK(infos[1].label == SparsityCase::kCase2);  // 3x2: zero last column
        CHECK(infos[2].label == SparsityCase::kCase2);  // 2x3: zero last row
        CHECK(infos[3].label == SparsityCase::kCase3);  // 2x2: zero last row+column
        CHECK(infos[1].zero_cols[3]);
        CHECK_FALSE(infos[1].zero_rows[3]);
        CHECK(infos[2].zero_rows[3]);
        CHECK(infos[3].zero_rows[3]);
        CHECK(infos[3].zero_cols[3]);
        CHECK(infos[0].zero_position_count() == 0);
        CHECK(infos[1].zero_position_count() == 4);
        CHECK(infos[3].zero_position_count() == 7);
    }
    SUBCASE("K_D=4, S=2: padding pushes every sub-filter to Case 3") {
        for (const auto& info : classify_layer_sparsity(4, 2)) {
            CHECK(info.label == SparsityCase::kCase3);
            CHECK(info.zero_position_count() == 7);
        }
    }
    SUBCASE("K_D=3: dense 3x3 support") {
        for (const auto& info : classify_layer_sparsity(3, 1))
            CHECK(info.label == SparsityCase::kCase1);
        for (const auto& info : classify_layer_sparsity(3, 2))
            CHECK(info.label == SparsityCase::kCase3);
    }
    SUBCASE("K_D=6, S=2: every sub-filter dense") {
        for (const auto& info : classify_layer_sparsity(6, 2))
            CHECK(info.label == SparsityCase::kCase1);
    }
    SUBCASE("zero line positions in the reordered matrix") {
        auto infos = classify_layer_sparsity(4, 2);
        CHECK(infos[0].zero_positions() ==
              std::vector<int>{3, 7, 11, 12, 13, 14, 15});
        auto k52 = classify_layer_sparsity(5, 2);
        CHECK(k52[1].zero_positions() == std::vector<int>{3, 7, 11, 15});
    }
    SUBCASE("unsupported kernel range") {
        CHECK_THROWS_AS(classify_layer_sparsity(7, 2), UnsupportedError);
        CHECK_THROWS_AS(classify_layer_sparsity(4, 1), UnsupportedError);
    }
}

TEST_CASE("live multiplication constants per output block") {
    CHECK(live_mults_per_block(5, 2) == 49);  // 16 + 12 + 12 + 9
    CHECK(live_mults_per_block(4, 2) == 36);  // 4 * 9
    CHECK(live_mults_per_block(3, 1) == 16);
    CHECK(live_mults_per_block(3, 2) == 36);
    CHECK(live_mults_per_block(6, 2) == 64);
}

TEST_CASE("structural zeros of transformed filters are exact") {
    FilterBank<double> w = random_filter_bank<double>(2, 3, 4, 77);
    WinogradFilterSet<double> set = transform_filters(decompose(w, 2));
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 3; ++n)
            for (int ab = 0; ab < 4; ++ab) {
                const SparsityInfo& info = set.sparsity[ab];
                const WinoTile<double>& u = set.at(m, n, ab / 2, ab % 2);
                for (int pos = 0; pos < 16; ++pos)
                    if (info.position_is_zero(pos)) CHECK(u[pos] == 0.0);
            }
}

TEST_CASE("winograd tdc equals standard across kernel/stride combos") {
    std::uint64_t seed = 5100;
    for (auto [kd, s] : std::array<std::array<int, 2>, 5>{
             {{5, 2}, {4, 2}, {3, 1}, {3, 2}, {6, 2}}}) {
        for (int pad : {0, 1, kd / 2}) {
            for (int opad : {0, s - 1}) {
                if (pad >= kd || opad >= s) continue;
                if (3 * s + kd - 2 * pad + opad - s <= 0) continue;
                LayerConfig layer = make_layer(2, 3, 4, 4, kd, s, pad, opad);
                FeatureMap<double> x = random_feature_map<double>(3, 4, 4, seed);
                FilterBank<double> w = random_filter_bank<double>(2, 3, kd, seed + 1);
                seed += 2;
                FeatureMap<double> want = standard_deconv(x, w, layer);
                FeatureMap<double> got = winograd_tdc_deconv(x, w, layer).output;
                double scale = 0;
                for (double v : want.data) scale = std::max(scale, std::abs(v));
                CHECK(max_abs_diff(got, want) <= 1e-12 * (1.0 + scale));
            }
        }
    }
}

TEST_CASE("skip path is bit-identical to the dense path") {
    std::uint64_t seed = 5600;
    for (auto [kd, s, pad, opad] : std::array<std::array<int, 4>, 4>{
             {{5, 2, 2, 1}, {4, 2, 1, 0}, {3, 2, 0, 1}, {3, 1, 1, 0}}}) {
        LayerConfig layer = make_layer(3, 2, 4, 6, kd, s, pad, opad);
        FeatureMap<double> x = random_feature_map<double>(2, 4, 6, seed);
        FilterBank<double> w = random_filter_bank<double>(3, 2, kd, seed + 1);
        seed += 2;
        auto dense = winograd_tdc_deconv(x, w, layer, false);
        auto sparse = winograd_tdc_deconv(x, w, layer, true);
        CHECK(dense.output.data == sparse.output.data);
        CHECK(dense.counters.skipped_rows == 0);
        CHECK(dense.counters.skipped_inverse_terms == 0);
        CHECK(sparse.counters.mults <= dense.counters.mults);
    }
}

TEST_CASE("execution counters follow the sparsity accounting") {
    SUBCASE("K_D=4, S=2: 7 skipped inverse terms per tile per sub-filter") {
        LayerConfig layer = make_layer(2, 3, 4, 4, 4, 2, 1, 0);
        FeatureMap<double> x = random_feature_map<double>(3, 4, 4, 91);
        FilterBank<double> w = random_filter_bank<double>(2, 3, 4, 92);
        auto r = winograd_tdc_deconv(x, w, layer, true);
        const std::uint64_t tiles = r.counters.tiles;
        CHECK(tiles == static_cast<std::uint64_t>(tile_grid_for(layer).count()));
        // every sub-filter is Case 3 here
        CHECK(r.counters.skipped_inverse_terms == tiles * 2 * 4 * 7);
        CHECK(r.counters.skipped_rows == tiles * 2 * 4 * 7);
        CHECK(r.counters.mults == tiles * 2 * 3 * 36);
        CHECK(r.counters.input_transforms == tiles * 3);

        auto d = winograd_tdc_deconv(x, w, layer, false);
        CHECK(d.counters.mults == tiles * 2 * 3 * 16 * 4);
    }
    SUBCASE("K_D=5, S=2: mixed-case totals") {
        LayerConfig layer = make_layer(2, 2, 4, 4, 5, 2, 2, 1);
        FeatureMap<double> x = random_feature_map<double>(2, 4, 4, 93);
        FilterBank<double> w = random_filter_bank<double>(2, 2, 5, 94);
        auto r = winograd_tdc_deconv(x, w, layer, true);
        const std::uint64_t tiles = r.counters.tiles;
        // zero positions per sub-filter: 0 + 4 + 4 + 7
        CHECK(r.counters.skipped_inverse_terms == tiles * 2 * 15);
        CHECK(r.counters.mults == tiles * 2 * 2 * 49);
    }
}

TEST_CASE("analytic winograd count matches execution on aligned layers") {
    // DCGAN-shaped geometry: the tile grid is exactly ceil(H/2) x ceil(W/2)
    for (int h : {4, 6, 8}) {
        LayerConfig layer = make_layer(2, 2, h, h, 5, 2, 2, 1);
        FeatureMap<double> x = random_feature_map<double>(2, h, h, 95);
        FilterBank<double> w = random_filter_bank<double>(2, 2, 5, 96);
        auto r = winograd_tdc_deconv(x, w, layer, true);
        CHECK(r.counters.mults == count_mults_winograd(layer));
    }
}

TEST_CASE("unsupported kernel sizes are rejected by name") {
    LayerConfig layer = make_layer(1, 1, 4, 4, 7, 2, 0, 0);
    FeatureMap<double> x(1, 4, 4);
    FilterBank<double> w(1, 1, 7);
    try {
        winograd_tdc_deconv(x, w, layer);
        FAIL("expected UnsupportedError");
    } catch (const UnsupportedError& e) {
        CHECK(std::string(e.what()).find("K_D <= 3S") != std::string::npos);
    }
}

TEST_CASE("sparse inverse transform reports its skipped terms") {
    auto infos = classify_layer_sparsity(4, 2);
    WinoTile<double> y{};
    SeededUniform rng(55);
    for (auto& v : y) v = rng.next();
    // zero the structurally dead positions, as the pipeline guarantees
    for (int pos = 0; pos < 16; ++pos)
        if (infos[0].position_is_zero(pos)) y[pos] = 0.0;
    auto sparse = sparse_inverse_transform(y, infos[0]);
    OutTile<double> dense = inverse_transform(y);
    CHECK(sparse.skipped_term_count == 7);
    for (int i = 0; i < 4; ++i) CHECK(sparse.tile[i] == dense[i]);
}
