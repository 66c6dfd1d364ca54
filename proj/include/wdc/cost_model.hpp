#ifndef WDC_COST_MODEL_HPP
#define WDC_COST_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wdc/core.hpp"
#include "wdc/deconv.hpp"
#include "wdc/tdc.hpp"
#include "wdc/winograd.hpp"

// Analytic multiplication counters and the accelerator timing/bandwidth/roofline
// model, with a design-space explorer over tiling factors. Bandwidth is in
// elements/second throughout; byte units are converted at the CLI boundary.

namespace wdc {

/// Layer dimensions plus the architectural knobs of the timing model.
/// T_m tiles the S^2*M expanded output maps, T_n the N input maps.
struct CostModelInputs {
    LayerConfig layer;
    int t_m = 1;
    int t_n = 1;
    double freq = 1e8;         // Hz
    double bandwidth = 1e9;    // elements / second
    double element_bytes = 4;  // applied only when converting user byte units
    // Live multiplications per mS x mS output block per channel (the C(K_C)
    // constant). 0 selects the structural count (49 for K_D=5,S=2; 36 for K_D=4,S=2).
    std::uint64_t live_mult_override = 0;
    // Transfer output tiles in Winograd-domain form (n^2 factor in T_D). When false,
    // an alternative spatial-only transfer (m*S rows of raw output) is modeled.
    bool winograd_domain_transfer = true;

    std::uint64_t live_mult_constant() const {
        return live_mult_override ? live_mult_override
                                  : live_mults_per_block(layer.k_d, layer.stride);
    }

    const CostModelInputs& validate() const {
        layer.validate();
        const long long s2m = static_cast<long long>(layer.stride) * layer.stride * layer.out_maps;
        if (t_m < 1 || t_m > s2m)
            throw ConfigError("t_m must satisfy 1 <= t_m <= S^2*M (got " + std::to_string(t_m) + ")");
        if (t_n < 1 || t_n > layer.in_maps)
            throw ConfigError("t_n must satisfy 1 <= t_n <= N (got " + std::to_string(t_n) + ")");
        if (!(freq > 0)) throw ConfigError("freq must be positive");
        if (!(bandwidth > 0)) throw ConfigError("bandwidth must be positive");
        return *this;
    }
};

namespace detail {
inline std::uint64_t ceil_div_u(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }
}  // namespace detail

/// Time to process one row-group (n input rows resident, m consumed):
/// T_C = ceil(S^2*M/T_m) * ceil(N/T_n) * ceil(W_I/m) * (C/m^2) / freq.
inline double t_compute(const CostModelInputs& in) {
    in.validate();
    const std::uint64_t s2m =
        static_cast<std::uint64_t>(in.layer.stride) * in.layer.stride * in.layer.out_maps;
    const std::uint64_t loops = detail::ceil_div_u(s2m, in.t_m) *
                                detail::ceil_div_u(in.layer.in_maps, in.t_n) *
                                detail::ceil_div_u(in.layer.w_in, kWinoOut);
    const double c = static_cast<double>(in.live_mult_constant());
    return static_cast<double>(loops) * (c / (kWinoOut * kWinoOut)) / in.freq;
}

/// Output transfer time per row-group: T_D = m*S * W_I * S^2*M * n^2 / bandwidth
/// (n^2 dropped under the spatial-only transfer model).
inline double t_transfer(const CostModelInputs& in) {
    in.validate();
    const std::uint64_t s2m =
        static_cast<std::uint64_t>(in.layer.stride) * in.layer.stride * in.layer.out_maps;
    std::uint64_t elems = static_cast<std::uint64_t>(kWinoOut) * in.layer.stride * in.layer.w_in * s2m;
    if (in.winograd_domain_transfer) elems *= kWinoIn * kWinoIn;
    return static_cast<double>(elems) / in.bandwidth;
}

/// Bandwidth needed for stall-free double buffering:
/// m^2/C * ceil(T_m*T_n/N) * m*S * n^2 * freq.
inline double required_bandwidth(const CostModelInputs& in) {
    in.validate();
    const double c = static_cast<double>(in.live_mult_constant());
    const std::uint64_t tile_term = detail::ceil_div_u(
        static_cast<std::uint64_t>(in.t_m) * in.t_n, in.layer.in_maps);
    return (static_cast<double>(kWinoOut * kWinoOut) / c) * static_cast<double>(tile_term) *
           (kWinoOut * in.layer.stride) * (kWinoIn * kWinoIn) * in.freq;
}

/// Initial fill before the pipeline starts (filters + first n input rows, moved in
/// Winograd-domain form): T_I = (S^2*M*N*r^2 + n*W_I*N) / (bandwidth/n^2).
inline double t_initial(const CostModelInputs& in) {
    in.validate();
    const std::uint64_t s2m =
        static_cast<std::uint64_t>(in.layer.stride) * in.layer.stride * in.layer.out_maps;
    const std::uint64_t filters = s2m * in.layer.in_maps * (kWinoTaps * kWinoTaps);
    const std::uint64_t rows =
        static_cast<std::uint64_t>(kWinoIn) * in.layer.w_in * in.layer.in_maps;
    return static_cast<double>(filters + rows) / (in.bandwidth / (kWinoIn * kWinoIn));
}

/// Attainable throughput: roof = 2*S^2*M*N*H_I*W_I*r^2 / (ceil(H_I/m)*T_C + T_I).
inline double computational_roof(const CostModelInputs& in) {
    in.validate();
    const std::uint64_t s2m =
        static_cast<std::uint64_t>(in.layer.stride) * in.layer.stride * in.layer.out_maps;
    const std::uint64_t ops = 2 * s2m * static_cast<std::uint64_t>(in.layer.in_maps) *
                              in.layer.h_in * in.layer.w_in * (kWinoTaps * kWinoTaps);
    const double time = static_cast<double>(detail::ceil_div_u(in.layer.h_in, kWinoOut)) *
                            t_compute(in) +
                        t_initial(in);
    return static_cast<double>(ops) / time;
}

/// Per-layer multiplication counts of every execution strategy.
struct LayerMults {
    int index = 0;
    LayerConfig layer;
    std::uint64_t standard = 0;
    std::uint64_t zero_padded = 0;
    std::uint64_t zero_padded_skip = 0;
    std::uint64_t tdc_dense = 0;
    std::uint64_t tdc_skip = 0;
    bool winograd_supported = true;
    std::uint64_t winograd_skip = 0;  // valid only when winograd_supported
};

struct MultReport {
    std::string model;
    std::vector<LayerMults> layers;
    std::uint64_t total_standard = 0;
    std::uint64_t total_zero_padded = 0;
    std::uint64_t total_zero_padded_skip = 0;
    std::uint64_t total_tdc_dense = 0;
    std::uint64_t total_tdc_skip = 0;
    std::uint64_t total_winograd_skip = 0;
    bool all_winograd_supported = true;

    /// zero_padded / winograd_skip over supported layers (the headline reduction).
    double winograd_reduction() const {
        return total_winograd_skip
                   ? static_cast<double>(total_zero_padded) / static_cast<double>(total_winograd_skip)
                   : std::numeric_limits<double>::quiet_NaN();
    }
};

inline MultReport mult_report(const ModelConfig& model) {
    model.validate();
    MultReport report;
    report.model = model.name;
    int idx = 0;
    for (const LayerConfig& layer : model.layers) {
        LayerMults lm;
        lm.index = idx++;
        lm.layer = layer;
        lm.standard = count_mults_standard(layer);
        lm.zero_padded = count_mults_zero_padded(layer, false);
        lm.zero_padded_skip = count_mults_zero_padded(layer, true);
        lm.tdc_dense = count_mults_tdc(layer, false);
        lm.tdc_skip = count_mults_tdc(layer, true);
        lm.winograd_supported = layer.k_d <= 3 * layer.stride;
        if (lm.winograd_supported) lm.winograd_skip = count_mults_winograd(layer);
        report.total_standard += lm.standard;
        report.total_zero_padded += lm.zero_padded;
        report.total_zero_padded_skip += lm.zero_padded_skip;
        report.total_tdc_dense += lm.tdc_dense;
        report.total_tdc_skip += lm.tdc_skip;
        if (lm.winograd_supported)
            report.total_winograd_skip += lm.winograd_skip;
        else
            report.all_winograd_supported = false;
        report.layers.push_back(std::move(lm));
    }
    return report;
}

/// One evaluated tiling-factor pair.
struct DseConfig {
    int t_m = 1;
    int t_n = 1;
    double computational_roof = 0;
    double required_bandwidth = 0;
    double t_compute = 0;
    double t_transfer = 0;
    double t_initial = 0;
};

struct DseResult {
    std::vector<DseConfig> configs;  // enumeration order: ascending t_m, then t_n
    int chosen = -1;                 // index into configs; -1 when nothing fits the cap
    double bandwidth_cap = 0;        // elements / second
    double min_required_bandwidth = 0;  // over all candidates

    bool feasible() const { return chosen >= 0; }
};

namespace detail {
/// Powers of two up to `limit`, plus `limit` itself.
inline std::vector<int> pow2_candidates(long long limit) {
    std::vector<int> out;
    for (long long v = 1; v <= limit; v *= 2) out.push_back(static_cast<int>(v));
    if (out.empty() || out.back() != limit) out.push_back(static_cast<int>(limit));
    return out;
}
}  // namespace detail

/// Enumerates tiling-factor pairs and picks the maximum computational roof whose
/// bandwidth requirement fits under the cap; ties prefer smaller T_m*T_n.
inline DseResult dse(const LayerConfig& layer, double bandwidth_cap, double freq,
                     std::vector<int> tm_candidates = {}, std::vector<int> tn_candidates = {}) {
    layer.validate();
    if (!(bandwidth_cap > 0)) throw ConfigError("bandwidth cap must be positive");
    const long long s2m = static_cast<long long>(layer.stride) * layer.stride * layer.out_maps;
    if (tm_candidates.empty()) tm_candidates = detail::pow2_candidates(s2m);
    if (tn_candidates.empty()) tn_candidates = detail::pow2_candidates(layer.in_maps);
    for (int v : tm_candidates)
        if (v < 1 || v > s2m) throw ConfigError("t_m candidate out of range: " + std::to_string(v));
    for (int v : tn_candidates)
        if (v < 1 || v > layer.in_maps)
            throw ConfigError("t_n candidate out of range: " + std::to_string(v));

    DseResult result;
    result.bandwidth_cap = bandwidth_cap;
    result.min_required_bandwidth = std::numeric_limits<double>::infinity();
    for (int tm : tm_candidates) {
        for (int tn : tn_candidates) {
            CostModelInputs in;
            in.layer = layer;
            in.t_m = tm;
            in.t_n = tn;
            in.freq = freq;
            in.bandwidth = bandwidth_cap;
            DseConfig cfg;
            cfg.t_m = tm;
            cfg.t_n = tn;
            cfg.t_compute = t_compute(in);
            cfg.t_transfer = t_transfer(in);
            cfg.t_initial = t_initial(in);
            cfg.required_bandwidth = required_bandwidth(in);
            cfg.computational_roof = computational_roof(in);
            result.min_required_bandwidth =
                std::min(result.min_required_bandwidth, cfg.required_bandwidth);
            const int i = static_cast<int>(result.configs.size());
            if (cfg.required_bandwidth <= bandwidth_cap) {
                if (result.chosen < 0) {
                    result.chosen = i;
                } else {
                    const DseConfig& best = result.configs[result.chosen];
                    const long long p = static_cast<long long>(tm) * tn;
                    const long long bp = static_cast<long long>(best.t_m) * best.t_n;
                    if (cfg.computational_roof > best.computational_roof ||
                        (cfg.computational_roof == best.computational_roof && p < bp))
                        result.chosen = i;
                }
            }
            result.configs.push_back(cfg);
        }
    }
    return result;
}

}  // namespace wdc

#endif  // WDC_COST_MODEL_HPP
