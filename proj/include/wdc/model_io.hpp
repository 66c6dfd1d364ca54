#ifndef WDC_MODEL_IO_HPP
#define WDC_MODEL_IO_HPP

#include <string>
#include <vector>

#include "wdc/core.hpp"

// Model/layer configuration loading: JSON files, inline key=value layer specs, and
// the built-in generator presets.

namespace wdc {

/// Parses `{"name": ..., "layers": [{out_maps, in_maps, h_in, w_in, k_d, stride,
/// pad, out_pad}, ...]}`. `source` names the origin in error locations.
ModelConfig parse_model_json(const std::string& text, const std::string& source);

ModelConfig load_model_file(const std::string& path);

/// Parses an inline spec like "kd=5,s=2,m=8,n=16,h=8,w=8,pad=2,opad=1".
/// Unset keys keep defaults (m=n=8, h=w=8, kd=5, s=2, pad=opad=0).
LayerConfig parse_layer_spec(const std::string& spec);

/// Names of the built-in presets, in a fixed order.
const std::vector<std::string>& preset_names();

/// Returns a built-in model by name; throws ConfigError for unknown names.
ModelConfig preset_model(const std::string& name);

}  // namespace wdc

#endif  // WDC_MODEL_IO_HPP
