#include "wdc/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wdc {

using nlohmann::json;

namespace {

int require_int(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ParseError(std::string("missing required key '") + key + "'", where);
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ParseError(std::string("key '") + key + "' must be an integer", where);
    return v.get<int>();
}

int optional_int(const json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ParseError(std::string("key '") + key + "' must be an integer", where);
    return v.get<int>();
}

}  // namespace

ModelConfig parse_model_json(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), source + ":byte " + std::to_string(e.byte));
    }
    if (!root.is_object()) throw ParseError("top level must be an object", source);
    ModelConfig model;
    model.name = root.value("name", std::string("unnamed"));
    if (!root.contains("layers") || !root.at("layers").is_array())
        throw ParseError("missing 'layers' array", source);
    int idx = 0;
    for (const json& entry : root.at("layers")) {
        const std::string where = source + ":layers[" + std::to_string(idx) + "]";
        if (!entry.is_object()) throw ParseError("layer entry must be an object", where);
        LayerConfig layer;
        layer.out_maps = require_int(entry, "out_maps", where);
        layer.in_maps = require_int(entry, "in_maps", where);
        layer.h_in = require_int(entry, "h_in", where);
        layer.w_in = require_int(entry, "w_in", where);
        layer.k_d = require_int(entry, "k_d", where);
        layer.stride = require_int(entry, "stride", where);
        layer.pad = optional_int(entry, "pad", 0, where);
        layer.out_pad = optional_int(entry, "out_pad", 0, where);
        try {
            layer.validate();
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), where);
        }
        model.layers.push_back(layer);
        ++idx;
    }
    model.validate();
    return model;
}

ModelConfig load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str(), path);
}

LayerConfig parse_layer_spec(const std::string& spec) {
    LayerConfig layer;
    layer.out_maps = 8;
    layer.in_maps = 8;
    layer.h_in = 8;
    layer.w_in = 8;
    layer.k_d = 5;
    layer.stride = 2;
    layer.pad = 0;
    layer.out_pad = 0;

    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value", "layer spec '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        int num = 0;
        try {
            std::size_t used = 0;
            num = std::stoi(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ParseError("value must be an integer", "layer spec '" + item + "'");
        }
        if (key == "m" || key == "out_maps")
            layer.out_maps = num;
        else if (key == "n" || key == "in_maps")
            layer.in_maps = num;
        else if (key == "h" || key == "h_in")
            layer.h_in = num;
        else if (key == "w" || key == "w_in")
            layer.w_in = num;
        else if (key == "kd" || key == "k_d")
            layer.k_d = num;
        else if (key == "s" || key == "stride")
            layer.stride = num;
        else if (key == "pad")
            layer.pad = num;
        else if (key == "opad" || key == "out_pad")
            layer.out_pad = num;
        else
            throw ParseError("unknown key '" + key + "'", "layer spec '" + item + "'");
    }
    layer.validate();
    return layer;
}

}  // namespace wdc
