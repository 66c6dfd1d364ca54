#ifndef WDC_REPORT_HPP
#define WDC_REPORT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wdc/buffer_sim.hpp"
#include "wdc/cost_model.hpp"
#include "wdc/core.hpp"
#include "wdc/verify.hpp"

// Report builders shared by the CLI subcommands. JSON and CSV renderings of one
// report carry the same content; every report embeds the resolved configuration and
// a schema_version field.

namespace wdc {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json layer_to_json(const LayerConfig& layer);

/// `verify`: cross-method equivalence summary.
nlohmann::json verify_report(const std::string& model_name, const VerifyResult& result,
                             std::uint64_t seed, const std::string& dtype);
std::string verify_csv(const nlohmann::json& report);

/// `analyze`: per-layer mult counts, per-sub-filter sparsity cases, live-mult
/// cross-check, and model-level reduction ratios.
nlohmann::json analyze_report(const ModelConfig& model);
std::string analyze_csv(const nlohmann::json& report);

/// `explore`: DSE sweep over tiling factors for one layer.
nlohmann::json explore_report(const std::string& model_name, int layer_index,
                              const LayerConfig& layer, const DseResult& result, double freq);
std::string explore_csv(const nlohmann::json& report);

/// `simulate`: dataflow trace for one (layer, T_m, T_n, bandwidth, freq) run.
nlohmann::json simulate_report(const std::string& model_name, int layer_index,
                               const LayerConfig& layer, const SimTrace& trace, int t_m, int t_n,
                               double freq);
std::string simulate_csv(const nlohmann::json& report);

/// Renders a report in the requested format ("json" or "csv").
std::string render_report(const nlohmann::json& report, const std::string& format);

}  // namespace wdc

#endif  // WDC_REPORT_HPP
