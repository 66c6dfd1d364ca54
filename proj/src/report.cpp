#include "wdc/report.hpp"

#include <sstream>

namespace wdc {

using nlohmann::json;

namespace {

// The timing model binds the W_l/H_l extents to the input feature map; reports carry
// the assumption so downstream consumers can rescale if they read them as outputs.
const char* kExtentAssumption =
    "timing-model W/H extents are bound to the input feature map (H_I, W_I)";

json make_report(const char* command) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

json layer_to_json(const LayerConfig& layer) {
    return json{{"out_maps", layer.out_maps}, {"in_maps", layer.in_maps},
                {"h_in", layer.h_in},         {"w_in", layer.w_in},
                {"k_d", layer.k_d},           {"stride", layer.stride},
                {"pad", layer.pad},           {"out_pad", layer.out_pad},
                {"k_c", layer.k_c()},         {"h_out", layer.output_height()},
                {"w_out", layer.output_width()}};
}

json verify_report(const std::string& model_name, const VerifyResult& result,
                   std::uint64_t seed, const std::string& dtype) {
    json j = make_report("verify");
    j["model"] = model_name;
    j["seed"] = seed;
    j["dtype"] = dtype;
    j["tol"] = result.tol;
    j["passed"] = result.passed;
    json layers = json::array();
    for (const LayerVerifyResult& lr : result.layers) {
        json comparisons = json::array();
        for (const MethodError& e : lr.comparisons)
            comparisons.push_back(json{{"method", e.method},
                                       {"max_rel_error", e.max_rel_error},
                                       {"within_tol", e.within_tol},
                                       {"worst", json{{"map", e.map}, {"row", e.row}, {"col", e.col}}}});
        layers.push_back(json{{"index", lr.index},
                              {"config", layer_to_json(lr.layer)},
                              {"passed", lr.passed},
                              {"comparisons", comparisons}});
    }
    j["layers"] = layers;
    return j;
}

std::string verify_csv(const json& report) {
    std::ostringstream out;
    out << "model,layer,method,max_rel_error,within_tol,worst_map,worst_row,worst_col\n";
    const std::string model = report.at("model").get<std::string>();
    for (const json& lr : report.at("layers")) {
        for (const json& c : lr.at("comparisons")) {
            out << csv_escape(model) << ',' << lr.at("index").get<int>() << ','
                << c.at("method").get<std::string>() << ','
                << c.at("max_rel_error").get<double>() << ','
                << (c.at("within_tol").get<bool>() ? 1 : 0) << ','
                << c.at("worst").at("map").get<int>() << ','
                << c.at("worst").at("row").get<int>() << ','
                << c.at("worst").at("col").get<int>() << '\n';
        }
    }
    return out.str();
}

json analyze_report(const ModelConfig& model) {
    const MultReport mr = mult_report(model);
    json j = make_report("analyze");
    j["model"] = mr.model;
    j["assumptions"] = json::array({kExtentAssumption});

    json layers = json::array();
    for (const LayerMults& lm : mr.layers) {
        json jl;
        jl["index"] = lm.index;
        jl["config"] = layer_to_json(lm.layer);
        json mults{{"standard", lm.standard},
                   {"zero_padded", lm.zero_padded},
                   {"zero_padded_skip", lm.zero_padded_skip},
                   {"tdc_dense", lm.tdc_dense},
                   {"tdc_skip", lm.tdc_skip}};
        mults["winograd_supported"] = lm.winograd_supported;
        if (lm.winograd_supported) mults["winograd_skip"] = lm.winograd_skip;
        jl["mults"] = mults;

        if (lm.winograd_supported) {
            json subs = json::array();
            const auto infos = classify_layer_sparsity(lm.layer.k_d, lm.layer.stride);
            for (int a = 0; a < lm.layer.stride; ++a)
                for (int b = 0; b < lm.layer.stride; ++b) {
                    const SparsityInfo& info = infos[a * lm.layer.stride + b];
                    subs.push_back(json{{"a", a},
                                        {"b", b},
                                        {"case", to_string(info.label)},
                                        {"zero_lines", info.zero_line_count()},
                                        {"zero_positions", info.zero_position_count()},
                                        {"live_mults", info.live_position_count()}});
                }
            jl["sub_filters"] = subs;
            const std::uint64_t live = live_mults_per_block(lm.layer.k_d, lm.layer.stride);
            jl["live_mults_per_block"] = live;
            const int k_c = lm.layer.k_c();
            if (k_c == 2 || k_c == 3) {
                const std::uint64_t expected = k_c == 2 ? 36 : 49;
                jl["live_mult_cross_check"] =
                    json{{"expected", expected}, {"counted", live}, {"match", live == expected}};
            }
        }
        layers.push_back(jl);
    }
    j["layers"] = layers;

    j["totals"] = json{{"standard", mr.total_standard},
                       {"zero_padded", mr.total_zero_padded},
                       {"zero_padded_skip", mr.total_zero_padded_skip},
                       {"tdc_dense", mr.total_tdc_dense},
                       {"tdc_skip", mr.total_tdc_skip},
                       {"winograd_skip", mr.total_winograd_skip},
                       {"all_winograd_supported", mr.all_winograd_supported}};
    json ratios;
    if (mr.total_winograd_skip) {
        ratios["zero_padded_over_winograd"] =
            static_cast<double>(mr.total_zero_padded) / static_cast<double>(mr.total_winograd_skip);
        ratios["tdc_dense_over_winograd"] =
            static_cast<double>(mr.total_tdc_dense) / static_cast<double>(mr.total_winograd_skip);
    }
    if (mr.total_tdc_dense)
        ratios["zero_padded_over_tdc_dense"] =
            static_cast<double>(mr.total_zero_padded) / static_cast<double>(mr.total_tdc_dense);
    j["ratios"] = ratios;
    return j;
}

std::string analyze_csv(const json& report) {
    std::ostringstream out;
    out << "model,layer,method,mults,T_C,T_D,T_I,roof,bandwidth,chosen\n";
    const std::string model = report.at("model").get<std::string>();
    static const char* methods[] = {"standard",  "zero_padded", "zero_padded_skip",
                                    "tdc_dense", "tdc_skip",    "winograd_skip"};
    for (const json& lr : report.at("layers")) {
        const json& mults = lr.at("mults");
        for (const char* m : methods) {
            if (!mults.contains(m)) continue;
            out << csv_escape(model) << ',' << lr.at("index").get<int>() << ',' << m << ','
                << mults.at(m).get<std::uint64_t>() << ",,,,,,\n";
        }
    }
    return out.str();
}

json explore_report(const std::string& model_name, int layer_index, const LayerConfig& layer,
                    const DseResult& result, double freq) {
    json j = make_report("explore");
    j["model"] = model_name;
    j["layer_index"] = layer_index;
    j["config"] = layer_to_json(layer);
    j["assumptions"] = json::array({kExtentAssumption});
    j["freq"] = freq;
    j["bandwidth_cap_elements"] = result.bandwidth_cap;
    j["feasible"] = result.feasible();
    j["chosen_index"] = result.chosen;
    j["min_required_bandwidth"] = result.min_required_bandwidth;
    json configs = json::array();
    for (std::size_t i = 0; i < result.configs.size(); ++i) {
        const DseConfig& c = result.configs[i];
        configs.push_back(json{{"t_m", c.t_m},
                               {"t_n", c.t_n},
                               {"roof", c.computational_roof},
                               {"required_bandwidth", c.required_bandwidth},
                               {"t_compute", c.t_compute},
                               {"t_transfer", c.t_transfer},
                               {"t_initial", c.t_initial},
                               {"chosen", static_cast<int>(i) == result.chosen}});
    }
    j["configs"] = configs;
    return j;
}

std::string explore_csv(const json& report) {
    std::ostringstream out;
    out << "model,layer,method,mults,T_C,T_D,T_I,roof,bandwidth,chosen\n";
    const std::string model = report.at("model").get<std::string>();
    const int layer = report.at("layer_index").get<int>();
    for (const json& c : report.at("configs")) {
        out << csv_escape(model) << ',' << layer << ','
            << "tiling_tm" << c.at("t_m").get<int>() << "_tn" << c.at("t_n").get<int>() << ",,"
            << c.at("t_compute").get<double>() << ',' << c.at("t_transfer").get<double>() << ','
            << c.at("t_initial").get<double>() << ',' << c.at("roof").get<double>() << ','
            << c.at("required_bandwidth").get<double>() << ','
            << (c.at("chosen").get<bool>() ? 1 : 0) << '\n';
    }
    return out.str();
}

json simulate_report(const std::string& model_name, int layer_index, const LayerConfig& layer,
                     const SimTrace& trace, int t_m, int t_n, double freq) {
    json j = make_report("simulate");
    j["model"] = model_name;
    j["layer_index"] = layer_index;
    j["config"] = layer_to_json(layer);
    j["assumptions"] = json::array({kExtentAssumption});
    j["t_m"] = t_m;
    j["t_n"] = t_n;
    j["freq"] = freq;
    j["bandwidth_elements"] = trace.bandwidth;
    j["plan"] = json{{"input_lines", trace.plan.input_lines},
                     {"output_lines", trace.plan.output_lines},
                     {"row_group_step", trace.plan.row_group_step},
                     {"input_capacity", trace.plan.input_capacity},
                     {"output_capacity", trace.plan.output_capacity}};
    j["summary"] = json{{"t_initial", trace.t_initial},
                        {"total_compute", trace.total_compute},
                        {"total_transfer", trace.total_transfer},
                        {"total_stall", trace.total_stall},
                        {"makespan", trace.makespan},
                        {"required_bandwidth", trace.required_bandwidth},
                        {"t_transfer_output_burst", trace.t_transfer_output_burst},
                        {"stalled", trace.stalled},
                        {"peak_input_occupancy", trace.peak_input_occupancy},
                        {"peak_output_occupancy", trace.peak_output_occupancy},
                        {"fetched_elements", trace.fetched_elements},
                        {"reused_elements", trace.reused_elements},
                        {"reuse_ratio", trace.reuse_ratio}};
    json groups = json::array();
    for (const RowGroupTrace& g : trace.groups)
        groups.push_back(json{{"row_group", g.index},
                              {"compute", g.compute_time},
                              {"transfer", g.transfer_time},
                              {"stall", g.stall_time},
                              {"input_occupancy", g.input_occupancy},
                              {"output_occupancy", g.output_occupancy}});
    j["groups"] = groups;
    return j;
}

std::string simulate_csv(const json& report) {
    std::ostringstream out;
    out << "row_group,compute,transfer,stall,input_occupancy,output_occupancy\n";
    for (const json& g : report.at("groups")) {
        out << g.at("row_group").get<int>() << ',' << g.at("compute").get<double>() << ','
            << g.at("transfer").get<double>() << ',' << g.at("stall").get<double>() << ','
            << g.at("input_occupancy").get<std::uint64_t>() << ','
            << g.at("output_occupancy").get<std::uint64_t>() << '\n';
    }
    return out.str();
}

std::string render_report(const json& report, const std::string& format) {
    if (format == "json") return report.dump(2) + "\n";
    if (format != "csv") throw ConfigError("unknown report format '" + format + "'");
    const std::string command = report.at("command").get<std::string>();
    if (command == "verify") return verify_csv(report);
    if (command == "analyze") return analyze_csv(report);
    if (command == "explore") return explore_csv(report);
    if (command == "simulate") return simulate_csv(report);
    throw ConfigError("no CSV renderer for command '" + command + "'");
}

}  // namespace wdc
