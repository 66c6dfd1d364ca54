// Command-line front end: cross-method verification, sparsity/mult analysis,
// tiling-factor design-space exploration, and line-buffer dataflow simulation.
//
// Exit codes: 0 success, 1 verification mismatch, 2 configuration/usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wdc/buffer_sim.hpp"
#include "wdc/cost_model.hpp"
#include "wdc/core.hpp"
#include "wdc/model_io.hpp"
#include "wdc/report.hpp"
#include "wdc/verify.hpp"

namespace {

struct CommonOpts {
    std::string model;    // preset name
    std::string config;   // model JSON path
    std::string layer;    // inline layer spec
    std::string out;      // output path ("" = stdout)
    std::string format = "json";
};

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wdc::ConfigError("cannot open output file: " + path);
    out << text;
}

wdc::ModelConfig resolve_model(const CommonOpts& opts) {
    if (!opts.config.empty()) return wdc::load_model_file(opts.config);
    if (!opts.model.empty()) return wdc::preset_model(opts.model);
    throw wdc::ConfigError("no model given: use --model <preset> or --config <file>");
}

/// Layer for explore/simulate: an inline spec, or one layer of a model.
std::pair<std::string, wdc::LayerConfig> resolve_layer(const CommonOpts& opts, int layer_index) {
    if (!opts.layer.empty()) return {"inline", wdc::parse_layer_spec(opts.layer)};
    const wdc::ModelConfig model = resolve_model(opts);
    if (layer_index < 0 || layer_index >= static_cast<int>(model.layers.size()))
        throw wdc::ConfigError("layer index " + std::to_string(layer_index) +
                               " out of range for model '" + model.name + "' (" +
                               std::to_string(model.layers.size()) + " layers)");
    return {model.name, model.layers[layer_index]};
}

int run_verify(const CommonOpts& opts, std::uint64_t seed, const std::string& dtype,
               std::optional<double> tol_opt) {
    wdc::ModelConfig model;
    if (!opts.layer.empty()) {
        model.name = "inline";
        model.layers.push_back(wdc::parse_layer_spec(opts.layer));
    } else {
        model = resolve_model(opts);
    }
    const double tol = tol_opt ? *tol_opt : (dtype == "f32" ? 1e-3 : 1e-9);

    wdc::VerifyResult result;
    if (dtype == "f64")
        result = wdc::verify_model<double>(model, seed, tol);
    else if (dtype == "f32")
        result = wdc::verify_model<float>(model, seed, tol);
    else
        throw wdc::ConfigError("unknown dtype '" + dtype + "' (use f32 or f64)");

    const nlohmann::json report = wdc::verify_report(model.name, result, seed, dtype);
    write_output(wdc::render_report(report, opts.format), opts.out);
    if (!result.passed) {
        for (const wdc::LayerVerifyResult& lr : result.layers)
            for (const wdc::MethodError& e : lr.comparisons)
                if (!e.within_tol)
                    std::cerr << "verify: layer " << lr.index << " method " << e.method
                              << " max rel error " << e.max_rel_error << " at (map " << e.map
                              << ", row " << e.row << ", col " << e.col << ") exceeds tol " << tol
                              << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Winograd transposed-convolution strategies, sparsity analysis, and "
                 "accelerator cost modeling"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t seed = 42;
    std::string dtype = "f64";
    std::optional<double> tol;
    double bw_bytes = 4e9;
    double freq = 1e8;
    double elem_bytes = 4;
    int layer_index = 0;
    int t_m = 4;
    int t_n = 128;
    std::optional<std::uint64_t> budget;

    auto add_common = [&](CLI::App* cmd, bool wants_layer) {
        cmd->add_option("--model", opts.model, "built-in preset (dcgan, artgan, discogan, gp-gan)");
        cmd->add_option("--config", opts.config, "model configuration JSON file");
        if (wants_layer)
            cmd->add_option("--layer", opts.layer,
                            "inline layer spec, e.g. kd=5,s=2,m=8,n=16,h=8,w=8,pad=2,opad=1");
        cmd->add_option("--out", opts.out, "write the report here instead of stdout");
        cmd->add_option("--format", opts.format, "report format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* verify = app.add_subcommand("verify", "run all four strategies and compare outputs");
    add_common(verify, true);
    verify->add_option("--seed", seed, "RNG seed for operands");
    verify->add_option("--dtype", dtype, "sample type: f32 or f64")
        ->check(CLI::IsMember({"f32", "f64"}));
    verify->add_option("--tol", [&tol](const std::vector<std::string>& vals) {
        tol = std::stod(vals.at(0));
        return true;
    }, "max relative error (default 1e-9 for f64, 1e-3 for f32)");

    CLI::App* analyze = app.add_subcommand("analyze", "mult counts and Winograd-domain sparsity");
    add_common(analyze, false);

    CLI::App* explore = app.add_subcommand("explore", "tiling-factor design-space exploration");
    add_common(explore, true);
    explore->add_option("--layer-index", layer_index, "layer of the model to explore");
    explore->add_option("--bw", bw_bytes, "platform bandwidth cap in bytes/s");
    explore->add_option("--freq", freq, "clock frequency in Hz");
    explore->add_option("--elem-bytes", elem_bytes, "bytes per sample");

    CLI::App* simulate = app.add_subcommand("simulate", "line-buffer dataflow simulation");
    add_common(simulate, true);
    simulate->add_option("--layer-index", layer_index, "layer of the model to simulate");
    CLI::Option* tm_opt = simulate->add_option("--tm", t_m, "output-map tiling factor T_m");
    CLI::Option* tn_opt = simulate->add_option("--tn", t_n, "input-map tiling factor T_n");
    simulate->add_option("--bw", bw_bytes, "DRAM bandwidth in bytes/s");
    simulate->add_option("--freq", freq, "clock frequency in Hz");
    simulate->add_option("--elem-bytes", elem_bytes, "bytes per sample");
    simulate->add_option("--budget", [&budget](const std::vector<std::string>& vals) {
        budget = std::stoull(vals.at(0));
        return true;
    }, "on-chip buffer budget in elements (reject plans that exceed it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!(elem_bytes > 0)) throw wdc::ConfigError("--elem-bytes must be positive");
        const double bw_elements = bw_bytes / elem_bytes;

        if (verify->parsed()) return run_verify(opts, seed, dtype, tol);

        if (analyze->parsed()) {
            const wdc::ModelConfig model = resolve_model(opts);
            write_output(wdc::render_report(wdc::analyze_report(model), opts.format), opts.out);
            return 0;
        }

        if (explore->parsed()) {
            auto [name, layer] = resolve_layer(opts, layer_index);
            const wdc::DseResult result = wdc::dse(layer, bw_elements, freq);
            const nlohmann::json report =
                wdc::explore_report(name, opts.layer.empty() ? layer_index : -1, layer, result, freq);
            write_output(wdc::render_report(report, opts.format), opts.out);
            return 0;
        }

        if (simulate->parsed()) {
            auto [name, layer] = resolve_layer(opts, layer_index);
            const long long s2m =
                static_cast<long long>(layer.stride) * layer.stride * layer.out_maps;
            if (tm_opt->count() == 0 && t_m > s2m) t_m = static_cast<int>(s2m);
            if (tn_opt->count() == 0 && t_n > layer.in_maps) t_n = layer.in_maps;
            const wdc::SimTrace trace =
                wdc::simulate_layer(layer, t_m, t_n, bw_elements, freq, budget);
            const nlohmann::json report = wdc::simulate_report(
                name, opts.layer.empty() ? layer_index : -1, layer, trace, t_m, t_n, freq);
            write_output(wdc::render_report(report, opts.format), opts.out);
            return 0;
        }
    } catch (const wdc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
