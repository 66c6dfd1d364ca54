#ifndef WDC_BUFFER_SIM_HPP
#define WDC_BUFFER_SIM_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "wdc/cost_model.hpp"
#include "wdc/core.hpp"
#include "wdc/winograd.hpp"

// Row-group-level simulator of the line-buffer dataflow: (n+m) input lines of T_n
// maps feed the compute stage while m lines are prefetched; finished output goes to a
// ping-pong buffer of 2*m*S lines of T_m maps whose idle half drains to DRAM.

namespace wdc {

/// On-chip buffer shape for a (layer, T_m, T_n) choice. Sizes are in elements.
struct BufferPlan {
    int input_lines = 0;              // n + m rows
    int output_lines = 0;             // 2 * m * S rows (two ping-pong halves)
    int row_group_step = kWinoOut;    // input rows consumed per group
    std::uint64_t input_capacity = 0;   // input_lines * W_I * T_n
    std::uint64_t output_capacity = 0;  // output_lines * W_O * T_m
};

inline BufferPlan make_buffer_plan(const LayerConfig& layer, int t_m, int t_n) {
    layer.validate();
    const long long s2m = static_cast<long long>(layer.stride) * layer.stride * layer.out_maps;
    if (t_m < 1 || t_m > s2m) throw ConfigError("t_m out of range for buffer plan");
    if (t_n < 1 || t_n > layer.in_maps) throw ConfigError("t_n out of range for buffer plan");
    BufferPlan plan;
    plan.input_lines = kWinoIn + kWinoOut;
    plan.output_lines = 2 * kWinoOut * layer.stride;
    plan.input_capacity =
        static_cast<std::uint64_t>(plan.input_lines) * layer.w_in * t_n;
    plan.output_capacity =
        static_cast<std::uint64_t>(plan.output_lines) * layer.output_width() * t_m;
    return plan;
}

/// Input-window overlap statistics between neighboring tiles.
struct ReuseStats {
    int overlap_elements_per_tile_pair = 0;  // (n-m) * n * S^2
    std::uint64_t fetched_elements = 0;      // each input pixel once per residency
    std::uint64_t reused_elements = 0;       // overlap accesses served from the buffer
    std::uint64_t naive_fetch_elements = 0;  // per-tile refetch baseline
    double reuse_ratio = 0;                  // reused / naive
};

inline ReuseStats reuse_stats(const LayerConfig& layer) {
    layer.validate();
    if (layer.k_c() > 3)
        throw UnsupportedError("reuse_stats requires K_C <= 3 (Winograd dataflow)");
    const int s2 = layer.stride * layer.stride;
    const TileGrid grid = tile_grid_for(layer);
    ReuseStats st;
    st.overlap_elements_per_tile_pair = (kWinoIn - kWinoOut) * kWinoIn * s2;
    st.fetched_elements =
        static_cast<std::uint64_t>(layer.in_maps) * layer.h_in * layer.w_in;
    const std::uint64_t pairs =
        static_cast<std::uint64_t>(grid.rows) * (grid.cols - 1) +
        static_cast<std::uint64_t>(grid.rows - 1) * grid.cols;
    st.reused_elements = pairs * st.overlap_elements_per_tile_pair * layer.in_maps;
    st.naive_fetch_elements = static_cast<std::uint64_t>(grid.count()) *
                              (kWinoIn * kWinoIn) * s2 * layer.in_maps;
    st.reuse_ratio = st.naive_fetch_elements
                         ? static_cast<double>(st.reused_elements) /
                               static_cast<double>(st.naive_fetch_elements)
                         : 0.0;
    return st;
}

struct RowGroupTrace {
    int index = 0;
    double compute_time = 0;
    double transfer_time = 0;
    double stall_time = 0;  // max(0, transfer - compute) under double buffering
    std::uint64_t input_occupancy = 0;
    std::uint64_t output_occupancy = 0;
};

struct SimTrace {
    BufferPlan plan;
    std::vector<RowGroupTrace> groups;
    double t_initial = 0;
    double total_compute = 0;
    double total_transfer = 0;
    double total_stall = 0;
    double makespan = 0;  // t_initial + sum of max(compute, transfer)
    double required_bandwidth = 0;
    double bandwidth = 0;
    double t_transfer_output_burst = 0;  // T_D of the full-burst transfer formula
    std::uint64_t peak_input_occupancy = 0;
    std::uint64_t peak_output_occupancy = 0;
    std::uint64_t fetched_elements = 0;
    std::uint64_t reused_elements = 0;
    double reuse_ratio = 0;
    bool stalled = false;
};

/// Runs the double-buffered pipeline over ceil(H_I/m) row-groups. Per group the
/// drain of the idle ping-pong half must finish within the compute latency T_C; the
/// drain lasts T_C * (required_bandwidth / bandwidth), so stalls appear exactly when
/// bandwidth falls short of the Eq.-style requirement.
inline SimTrace simulate_layer(const LayerConfig& layer, int t_m, int t_n, double bandwidth,
                               double freq,
                               std::optional<std::uint64_t> on_chip_budget = std::nullopt) {
    CostModelInputs in;
    in.layer = layer;
    in.t_m = t_m;
    in.t_n = t_n;
    in.freq = freq;
    in.bandwidth = bandwidth;
    in.validate();

    SimTrace trace;
    trace.plan = make_buffer_plan(layer, t_m, t_n);
    if (on_chip_budget &&
        trace.plan.input_capacity + trace.plan.output_capacity > *on_chip_budget)
        throw ConfigError("buffer plan exceeds on-chip budget: needs " +
                          std::to_string(trace.plan.input_capacity + trace.plan.output_capacity) +
                          " elements, budget " + std::to_string(*on_chip_budget));

    const double t_c = t_compute(in);
    trace.required_bandwidth = required_bandwidth(in);
    trace.bandwidth = bandwidth;
    trace.t_initial = t_initial(in);
    trace.t_transfer_output_burst = t_transfer(in);
    const double drain = t_c * (trace.required_bandwidth / bandwidth);

    const int h_out = layer.output_height();
    const int w_out = layer.output_width();
    const int groups = (layer.h_in + kWinoOut - 1) / kWinoOut;
    const int out_rows_per_group = kWinoOut * layer.stride;
    trace.makespan = trace.t_initial;
    for (int g = 0; g < groups; ++g) {
        RowGroupTrace rg;
        rg.index = g;
        rg.compute_time = t_c;
        rg.transfer_time = drain;
        rg.stall_time = std::max(0.0, drain - t_c);

        const int resident_rows =
            std::min(trace.plan.input_lines, layer.h_in - g * kWinoOut);
        rg.input_occupancy = static_cast<std::uint64_t>(resident_rows) * layer.w_in * t_n;
        const int filling = std::clamp(h_out - g * out_rows_per_group, 0, out_rows_per_group);
        const int draining =
            g > 0 ? std::clamp(h_out - (g - 1) * out_rows_per_group, 0, out_rows_per_group) : 0;
        rg.output_occupancy = static_cast<std::uint64_t>(filling + draining) * w_out * t_m;

        trace.total_compute += rg.compute_time;
        trace.total_transfer += rg.transfer_time;
        trace.total_stall += rg.stall_time;
        trace.makespan += std::max(rg.compute_time, rg.transfer_time);
        trace.peak_input_occupancy = std::max(trace.peak_input_occupancy, rg.input_occupancy);
        trace.peak_output_occupancy = std::max(trace.peak_output_occupancy, rg.output_occupancy);
        trace.groups.push_back(rg);
    }
    trace.stalled = trace.total_stall > 0;

    const ReuseStats reuse = reuse_stats(layer);
    trace.fetched_elements = reuse.fetched_elements;
    trace.reused_elements = reuse.reused_elements;
    trace.reuse_ratio = reuse.reuse_ratio;
    return trace;
}

}  // namespace wdc

#endif  // WDC_BUFFER_SIM_HPP
