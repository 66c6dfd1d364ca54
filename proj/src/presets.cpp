#include "wdc/model_io.hpp"

// Built-in generator configurations: four-stage stride-2 transposed-convolution
// stacks upsampling 4x4 seeds to 64x64 images. Kernel/stride/padding follow the
// published generator architectures (5x5 for dcgan, 4x4 for the others); channel
// widths follow the common 1024-512-256-128 (or half-width) progressions.

namespace wdc {

namespace {

constexpr const char* kDcgan = R"json({
  "name": "dcgan",
  "layers": [
    {"out_maps": 512, "in_maps": 1024, "h_in": 4,  "w_in": 4,  "k_d": 5, "stride": 2, "pad": 2, "out_pad": 1},
    {"out_maps": 256, "in_maps": 512,  "h_in": 8,  "w_in": 8,  "k_d": 5, "stride": 2, "pad": 2, "out_pad": 1},
    {"out_maps": 128, "in_maps": 256,  "h_in": 16, "w_in": 16, "k_d": 5, "stride": 2, "pad": 2, "out_pad": 1},
    {"out_maps": 3,   "in_maps": 128,  "h_in": 32, "w_in": 32, "k_d": 5, "stride": 2, "pad": 2, "out_pad": 1}
  ]
})json";

constexpr const char* kArtgan = R"json({
  "name": "artgan",
  "layers": [
    {"out_maps": 512, "in_maps": 1024, "h_in": 4,  "w_in": 4,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 256, "in_maps": 512,  "h_in": 8,  "w_in": 8,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 128, "in_maps": 256,  "h_in": 16, "w_in": 16, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 3,   "in_maps": 128,  "h_in": 32, "w_in": 32, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0}
  ]
})json";

constexpr const char* kDiscogan = R"json({
  "name": "discogan",
  "layers": [
    {"out_maps": 256, "in_maps": 512, "h_in": 4,  "w_in": 4,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 128, "in_maps": 256, "h_in": 8,  "w_in": 8,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 64,  "in_maps": 128, "h_in": 16, "w_in": 16, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 3,   "in_maps": 64,  "h_in": 32, "w_in": 32, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0}
  ]
})json";

constexpr const char* kGpGan = R"json({
  "name": "gp-gan",
  "layers": [
    {"out_maps": 512, "in_maps": 1024, "h_in": 4,  "w_in": 4,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 256, "in_maps": 512,  "h_in": 8,  "w_in": 8,  "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 128, "in_maps": 256,  "h_in": 16, "w_in": 16, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0},
    {"out_maps": 3,   "in_maps": 128,  "h_in": 32, "w_in": 32, "k_d": 4, "stride": 2, "pad": 1, "out_pad": 0}
  ]
})json";

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"dcgan", "artgan", "discogan", "gp-gan"};
    return names;
}

ModelConfig preset_model(const std::string& name) {
    const char* text = nullptr;
    if (name == "dcgan")
        text = kDcgan;
    else if (name == "artgan")
        text = kArtgan;
    else if (name == "discogan")
        text = kDiscogan;
    else if (name == "gp-gan" || name == "gpgan")
        text = kGpGan;
    if (!text) {
        std::string known;
        for (const std::string& n : preset_names()) {
            if (!known.empty()) known += ", ";
            known += n;
        }
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return parse_model_json(text, "preset:" + name);
}

}  // namespace wdc
