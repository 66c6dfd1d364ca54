#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wdc/model_io.hpp"
#include "wdc/report.hpp"

using namespace wdc;
using nlohmann::json;

namespace {

ModelConfig toy_model() {
    ModelConfig model;
    model.name = "toy";
    LayerConfig a;
    a.out_maps = 2;
    a.in_maps = 3;
    a.h_in = 4;
    a.w_in = 4;
    a.k_d = 5;
    a.stride = 2;
    a.pad = 2;
    a.out_pad = 1;
    LayerConfig b = a;
    b.out_maps = 3;
    b.in_maps = 2;
    b.h_in = 8;
    b.w_in = 8;
    model.layers = {a, b};
    model.validate();
    return model;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("every report carries the schema version and command") {
    ModelConfig model = toy_model();
    const LayerConfig& layer = model.layers[0];

    json v = verify_report(model.name, verify_model<double>(model, 1, 1e-9), 1, "f64");
    json a = analyze_report(model);
    json e = explore_report(model.name, 0, layer, dse(layer, 1e12, 1e8), 1e8);
    json s = simulate_report(model.name, 0, layer, simulate_layer(layer, 2, 3, 1e9, 1e8), 2, 3, 1e8);

    for (const json* r : {&v, &a, &e, &s}) {
        CHECK(r->at("schema_version").get<int>() == kReportSchemaVersion);
        CHECK(r->contains("command"));
        CHECK(r->contains("model"));
    }
    CHECK(v["command"] == "verify");
    CHECK(a["command"] == "analyze");
    CHECK(e["command"] == "explore");
    CHECK(s["command"] == "simulate");
    CHECK(v["passed"].get<bool>());
}

TEST_CASE("analyze report contents") {
    json report = analyze_report(toy_model());

    REQUIRE(report.at("layers").size() == 2);
    const json& l0 = report["layers"][0];
    CHECK(l0.at("config").at("k_c").get<int>() == 3);
    CHECK(l0.at("config").at("h_out").get<int>() == 8);
    REQUIRE(l0.at("sub_filters").size() == 4);
    CHECK(l0.at("live_mults_per_block").get<int>() == 49);
    CHECK(l0.at("live_mult_cross_check").at("match").get<bool>());
    CHECK(l0.at("mults").at("winograd_supported").get<bool>());

    const json& totals = report.at("totals");
    CHECK(totals.at("all_winograd_supported").get<bool>());
    CHECK(totals.at("tdc_skip").get<std::uint64_t>() == totals.at("standard").get<std::uint64_t>());

    const json& ratios = report.at("ratios");
    CHECK(ratios.at("zero_padded_over_winograd").get<double>() ==
          doctest::Approx(400.0 / 49.0).epsilon(1e-12));
    CHECK(ratios.at("zero_padded_over_tdc_dense").get<double>() ==
          doctest::Approx(25.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("analyze csv layout matches the json content") {
    json report = analyze_report(toy_model());
    std::vector<std::string> lines = csv_lines(analyze_csv(report));
    CHECK(lines[0] == "model,layer,method,mults,T_C,T_D,T_I,roof,bandwidth,chosen");
    CHECK(lines.size() == 1 + 2 * 6);  // two layers, six methods each

    // spot-check one row against the json it was rendered from
    const std::string expect = "toy,0,standard," +
                               std::to_string(report["layers"][0]["mults"]["standard"]
                                                  .get<std::uint64_t>()) +
                               ",,,,,,";
    CHECK(lines[1] == expect);
}

TEST_CASE("explore report and csv") {
    LayerConfig layer = toy_model().layers[0];
    DseResult result = dse(layer, 1e12, 1e8);
    json report = explore_report("toy", 0, layer, result, 1e8);

    CHECK(report.at("feasible").get<bool>());
    CHECK(report.at("chosen_index").get<int>() == result.chosen);
    REQUIRE(report.at("configs").size() == result.configs.size());
    int chosen_rows = 0;
    for (const json& c : report["configs"]) chosen_rows += c.at("chosen").get<bool>() ? 1 : 0;
    CHECK(chosen_rows == 1);

    std::vector<std::string> lines = csv_lines(explore_csv(report));
    CHECK(lines[0] == "model,layer,method,mults,T_C,T_D,T_I,roof,bandwidth,chosen");
    CHECK(lines.size() == 1 + result.configs.size());
    CHECK(lines[1].rfind("toy,0,tiling_tm1_tn1,,", 0) == 0);
    int chosen_cells = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (lines[i].back() == '1') ++chosen_cells;
    CHECK(chosen_cells == 1);
}

TEST_CASE("simulate report and csv") {
    LayerConfig layer = toy_model().layers[0];
    SimTrace trace = simulate_layer(layer, 2, 3, 1e9, 1e8);
    json report = simulate_report("toy", 0, layer, trace, 2, 3, 1e8);

    CHECK(report.at("summary").contains("t_transfer_output_burst"));
    CHECK(report.at("summary").at("makespan").get<double>() == trace.makespan);
    CHECK(report.at("plan").at("input_lines").get<int>() == 6);
    REQUIRE(report.at("groups").size() == trace.groups.size());

    std::vector<std::string> lines = csv_lines(simulate_csv(report));
    CHECK(lines[0] == "row_group,compute,transfer,stall,input_occupancy,output_occupancy");
    CHECK(lines.size() == 1 + trace.groups.size());
    CHECK(lines[1].rfind("0,", 0) == 0);
}

TEST_CASE("render_report dispatch") {
    json report = analyze_report(toy_model());

    const std::string rendered = render_report(report, "json");
    CHECK(rendered.back() == '\n');
    CHECK(json::parse(rendered) == report);

    CHECK(render_report(report, "csv") == analyze_csv(report));
    CHECK_THROWS_AS(render_report(report, "yaml"), ConfigError);

    json bogus = report;
    bogus["command"] = "mystery";
    CHECK_THROWS_AS(render_report(bogus, "csv"), ConfigError);
}
