#ifndef WDC_CORE_HPP
#define WDC_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wdc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid layer/model parameters or mismatched tensor dimensions.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Malformed input file; carries a human-readable location.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, const std::string& location)
        : Error(msg + " (at " + location + ")"), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// Configuration outside the range the fast paths support.
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

/// Dense rank-3 feature-map stack, row-major within each channel.
template <typename T>
struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<T> data;

    FeatureMap() = default;
    FeatureMap(int c, int h, int w)
        : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, T(0)) {
        if (c < 1 || h < 1 || w < 1)
            throw ConfigError("feature map dimensions must all be >= 1");
    }

    T& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    const T& at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    std::size_t size() const { return data.size(); }
};

/// Trained transposed-convolution weights, indexed [out_map][in_map][row][col].
template <typename T>
struct FilterBank {
    int out_maps = 0;
    int in_maps = 0;
    int k = 0;  // square kernel width
    std::vector<T> data;

    FilterBank() = default;
    FilterBank(int m, int n, int kd)
        : out_maps(m), in_maps(n), k(kd),
          data(static_cast<std::size_t>(m) * n * kd * kd, T(0)) {
        if (m < 1 || n < 1 || kd < 1)
            throw ConfigError("filter bank dimensions must all be >= 1");
    }

    T& at(int m, int n, int i, int j) {
        return data[((static_cast<std::size_t>(m) * in_maps + n) * k + i) * k + j];
    }
    const T& at(int m, int n, int i, int j) const {
        return data[((static_cast<std::size_t>(m) * in_maps + n) * k + i) * k + j];
    }
    std::size_t size() const { return data.size(); }
};

/// One transposed-convolution layer: counts, extents and stride geometry.
struct LayerConfig {
    int out_maps = 1;   // M
    int in_maps = 1;    // N
    int h_in = 1;       // input feature-map height
    int w_in = 1;       // input feature-map width
    int k_d = 5;        // kernel width
    int stride = 2;     // S
    int pad = 0;
    int out_pad = 0;

    /// Width of the sub-filters after conversion to convolutions: ceil(k_d / stride).
    int k_c() const { return (k_d + stride - 1) / stride; }

    void validate() const;
    int output_height() const;
    int output_width() const;
};

struct ModelConfig {
    std::string name;
    std::vector<LayerConfig> layers;

    /// Throws if consecutive layers are not chainable.
    void validate() const;
};

inline void LayerConfig::validate() const {
    if (out_maps < 1 || in_maps < 1) throw ConfigError("map counts must be >= 1");
    if (h_in < 1 || w_in < 1) throw ConfigError("input extents must be >= 1");
    if (k_d < 1) throw ConfigError("kernel width must be >= 1");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (pad < 0 || pad >= k_d) throw ConfigError("pad must satisfy 0 <= pad < k_d");
    if (out_pad < 0 || out_pad >= stride)
        throw ConfigError("out_pad must satisfy 0 <= out_pad < stride");
}

// H_O = S*(H_I - 1) + K_D - 2*pad + out_pad
inline int deconv_output_extent(int in, int k_d, int stride, int pad, int out_pad) {
    return stride * (in - 1) + k_d - 2 * pad + out_pad;
}

inline int LayerConfig::output_height() const {
    validate();
    int h = deconv_output_extent(h_in, k_d, stride, pad, out_pad);
    if (h <= 0) throw ConfigError("layer produces non-positive output height");
    return h;
}

inline int LayerConfig::output_width() const {
    validate();
    int w = deconv_output_extent(w_in, k_d, stride, pad, out_pad);
    if (w <= 0) throw ConfigError("layer produces non-positive output width");
    return w;
}

inline void ModelConfig::validate() const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
        layers[i].validate();
        if (i + 1 < layers.size()) {
            const LayerConfig& cur = layers[i];
            const LayerConfig& next = layers[i + 1];
            if (cur.out_maps != next.in_maps || cur.output_height() != next.h_in ||
                cur.output_width() != next.w_in)
                throw ConfigError("model '" + name + "': layer " + std::to_string(i + 1) +
                                  " is not chainable after layer " + std::to_string(i));
        }
    }
}

/// Checks that (x, w) match the layer's N/M/K_D/extents.
template <typename T>
void check_layer_operands(const FeatureMap<T>& x, const FilterBank<T>& w,
                          const LayerConfig& layer) {
    layer.validate();
    if (x.channels != layer.in_maps || x.height != layer.h_in || x.width != layer.w_in)
        throw ConfigError("input feature map does not match layer dimensions");
    if (w.out_maps != layer.out_maps || w.in_maps != layer.in_maps || w.k != layer.k_d)
        throw ConfigError("filter bank does not match layer dimensions");
}

}  // namespace wdc

#endif  // WDC_CORE_HPP
