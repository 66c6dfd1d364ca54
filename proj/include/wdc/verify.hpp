#ifndef WDC_VERIFY_HPP
#define WDC_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wdc/core.hpp"
#include "wdc/deconv.hpp"
#include "wdc/tdc.hpp"
#include "wdc/tensor_io.hpp"
#include "wdc/winograd.hpp"

// Cross-method equivalence runner: executes all four strategies on seeded random
// data and reports the worst relative disagreement against the standard route.
// The CLI's `verify` command and the test suite both go through these entry points.

namespace wdc {

struct MethodError {
    std::string method;
    double max_rel_error = 0;
    int map = 0, row = 0, col = 0;  // worst output coordinate
    bool within_tol = true;
};

struct LayerVerifyResult {
    int index = 0;
    LayerConfig layer;
    std::vector<MethodError> comparisons;  // zero_padded, tdc, winograd vs standard
    bool passed = true;
};

struct VerifyResult {
    bool passed = true;
    double tol = 0;
    std::vector<LayerVerifyResult> layers;
};

namespace detail {

/// Max |a-b| over the map, normalized by max |reference| (absolute when the
/// reference is identically zero).
template <typename T>
MethodError compare_maps(const std::string& method, const FeatureMap<T>& ref,
                         const FeatureMap<T>& got, double tol) {
    MethodError err;
    err.method = method;
    double denom = 0;
    for (const T& v : ref.data) denom = std::max(denom, std::abs(static_cast<double>(v)));
    double worst = 0;
    for (int c = 0; c < ref.channels; ++c)
        for (int y = 0; y < ref.height; ++y)
            for (int x = 0; x < ref.width; ++x) {
                const double d = std::abs(static_cast<double>(ref.at(c, y, x)) -
                                          static_cast<double>(got.at(c, y, x)));
                if (d > worst) {
                    worst = d;
                    err.map = c;
                    err.row = y;
                    err.col = x;
                }
            }
    err.max_rel_error = denom > 0 ? worst / denom : worst;
    err.within_tol = err.max_rel_error <= tol;
    return err;
}

}  // namespace detail

/// Runs all four strategies on one layer with seeded random operands.
template <typename T>
LayerVerifyResult verify_layer(const LayerConfig& layer, int index, std::uint64_t seed,
                               double tol) {
    layer.validate();
    const FeatureMap<T> x =
        random_feature_map<T>(layer.in_maps, layer.h_in, layer.w_in, seed);
    const FilterBank<T> w =
        random_filter_bank<T>(layer.out_maps, layer.in_maps, layer.k_d, seed ^ 0x9e3779b97f4a7c15ull);

    const FeatureMap<T> ref = standard_deconv(x, w, layer);
    const FeatureMap<T> zp = zero_padded_deconv(x, w, layer);
    const FeatureMap<T> td = tdc_deconv(x, w, layer);
    const FeatureMap<T> wg = winograd_tdc_deconv(x, w, layer).output;

    LayerVerifyResult result;
    result.index = index;
    result.layer = layer;
    result.comparisons.push_back(detail::compare_maps("zero_padded", ref, zp, tol));
    result.comparisons.push_back(detail::compare_maps("tdc", ref, td, tol));
    result.comparisons.push_back(detail::compare_maps("winograd_tdc", ref, wg, tol));
    for (const MethodError& e : result.comparisons) result.passed = result.passed && e.within_tol;
    return result;
}

/// Per-layer seeds are decorrelated from the base seed by the layer index.
template <typename T>
VerifyResult verify_model(const ModelConfig& model, std::uint64_t seed, double tol) {
    model.validate();
    VerifyResult result;
    result.tol = tol;
    int idx = 0;
    for (const LayerConfig& layer : model.layers) {
        result.layers.push_back(
            verify_layer<T>(layer, idx, seed + 0x100000001b3ull * idx, tol));
        result.passed = result.passed && result.layers.back().passed;
        ++idx;
    }
    return result;
}

}  // namespace wdc

#endif  // WDC_VERIFY_HPP
