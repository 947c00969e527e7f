#include "core/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace visnet {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Simplified: return "simplified";
        case Variant::Rbf: return "rbf";
        case Variant::Md: return "md";
        case Variant::Li: return "li";
        case Variant::LiDogRgb: return "li-dog-rgb";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "simplified") return Variant::Simplified;
    if (name == "rbf") return Variant::Rbf;
    if (name == "md") return Variant::Md;
    if (name == "li") return Variant::Li;
    if (name == "li-dog-rgb") return Variant::LiDogRgb;
    throw ParamError("variant: unknown value '" + name + "'");
}

std::vector<float> minmax_normalize(const std::vector<float>& values) {
    if (values.empty()) throw ParamError("minmax_normalize: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const float mn = *mn_it;
    const float mx = *mx_it;
    std::vector<float> out(values.size(), 0.0f);
    if (mx == mn) return out; // featureless layer transmits nothing
    const float range = mx - mn;
    // Division (not reciprocal multiply) pins the max to exactly 1.
    for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mn) / range;
    return out;
}

void normalize_weights(float* w, size_t n) {
    double sq = 0.0;
    for (size_t i = 0; i < n; ++i) sq += static_cast<double>(w[i]) * w[i];
    if (sq <= 0.0) throw RuntimeFailure("normalize_weights: degenerate zero weight vector");
    const float inv = static_cast<float>(1.0 / std::sqrt(sq));
    for (size_t i = 0; i < n; ++i) w[i] *= inv;
}

float rbf_activation(const float* x, const float* c, size_t n, float sigma) {
    if (!(sigma > 0.0f)) throw ParamError("rbf.sigma: must be > 0");
    double sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(x[i]) - c[i];
        sq += d * d;
    }
    return static_cast<float>(std::exp(-sq / (2.0 * static_cast<double>(sigma) * sigma)));
}

std::vector<float> lateral_inhibition(const std::vector<float>& activations, int side,
                                      const InhibitionParams& params) {
    if (params.radius < 1) throw ParamError("inhibition.radius: must be >= 1");
    if (params.radius >= side) throw ParamError("inhibition.radius: must be < grid side");
    // Summed-area table for O(1) window sums.
    std::vector<double> sat(static_cast<size_t>(side + 1) * (side + 1), 0.0);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            sat[static_cast<size_t>(y + 1) * (side + 1) + (x + 1)] =
                activations[static_cast<size_t>(y) * side + x] +
                sat[static_cast<size_t>(y) * (side + 1) + (x + 1)] +
                sat[static_cast<size_t>(y + 1) * (side + 1) + x] -
                sat[static_cast<size_t>(y) * (side + 1) + x];
        }
    }
    std::vector<float> out(activations.size());
    const int r = params.radius;
    for (int y = 0; y < side; ++y) {
        const int y0 = std::max(0, y - r), y1 = std::min(side - 1, y + r);
        for (int x = 0; x < side; ++x) {
            const int x0 = std::max(0, x - r), x1 = std::min(side - 1, x + r);
            const double sum = sat[static_cast<size_t>(y1 + 1) * (side + 1) + (x1 + 1)] -
                               sat[static_cast<size_t>(y0) * (side + 1) + (x1 + 1)] -
                               sat[static_cast<size_t>(y1 + 1) * (side + 1) + x0] +
                               sat[static_cast<size_t>(y0) * (side + 1) + x0];
            const int count = (y1 - y0 + 1) * (x1 - x0 + 1);
            const float a = activations[static_cast<size_t>(y) * side + x];
            float suppressed = a;
            if (count > 1) {
                const float neigh_mean = static_cast<float>((sum - a) / (count - 1));
                suppressed = a - params.strength * neigh_mean;
            }
            out[static_cast<size_t>(y) * side + x] = suppressed > 0.0f ? suppressed : 0.0f;
        }
    }
    return out;
}

// Gather the zero-padded patch feeding one neuron and L2-normalize it.
// Returns false (leaving zeros) when the patch has no energy.
static bool gather_patch(const float* input, int in_side, int in_channels, int row, int col,
                         int patch, float* out) {
    const int off = (patch - 1) / 2;
    const size_t plane = static_cast<size_t>(in_side) * in_side;
    const bool interior = row - off >= 0 && row - off + patch <= in_side && col - off >= 0 &&
                          col - off + patch <= in_side;
    double sq = 0.0;
    size_t idx = 0;
    for (int c = 0; c < in_channels; ++c) {
        const float* src = input + c * plane;
        if (interior) {
            for (int dy = 0; dy < patch; ++dy) {
                const float* rowp = src + static_cast<size_t>(row - off + dy) * in_side + (col - off);
                for (int dx = 0; dx < patch; ++dx, ++idx) {
                    const float v = rowp[dx];
                    out[idx] = v;
                    sq += static_cast<double>(v) * v;
                }
            }
            continue;
        }
        for (int dy = 0; dy < patch; ++dy) {
            const int y = row - off + dy;
            for (int dx = 0; dx < patch; ++dx, ++idx) {
                const int x = col - off + dx;
                float v = 0.0f;
                if (y >= 0 && y < in_side && x >= 0 && x < in_side) {
                    v = src[static_cast<size_t>(y) * in_side + x];
                }
                out[idx] = v;
                sq += static_cast<double>(v) * v;
            }
        }
    }
    if (sq <= 0.0) return false;
    const float inv = static_cast<float>(1.0 / std::sqrt(sq));
    const size_t n = static_cast<size_t>(patch) * patch * in_channels;
    for (size_t i = 0; i < n; ++i) out[i] *= inv;
    return true;
}

std::vector<float> forward_layer(const LayerState& layer, const float* input, int in_side,
                                 int in_channels, Variant variant,
                                 const InhibitionParams& inhibition, LayerForward* capture) {
    const LayerGeometry& g = layer.geometry;
    if (in_channels != g.in_channels) {
        throw RuntimeFailure("forward_layer: input channel count does not match layer geometry");
    }
    if (in_side != g.grid) {
        throw RuntimeFailure("forward_layer: input side does not match layer grid");
    }
    const int fan_in = g.fan_in();
    const size_t neurons = static_cast<size_t>(g.neurons());
    std::vector<float> raw(neurons, 0.0f);
    std::vector<float>* patch_store = nullptr;
    if (capture) {
        capture->patches.assign(neurons * fan_in, 0.0f);
        patch_store = &capture->patches;
    }
    const bool rbf = variant == Variant::Rbf;
    parallel_for(neurons, [&](size_t begin, size_t end) {
        std::vector<float> local(fan_in);
        for (size_t n = begin; n < end; ++n) {
            float* patch = patch_store ? patch_store->data() + n * fan_in : local.data();
            const int row = static_cast<int>(n) / g.grid;
            const int col = static_cast<int>(n) % g.grid;
            const bool ok = gather_patch(input, in_side, in_channels, row, col, g.patch, patch);
            if (rbf) {
                raw[n] = rbf_activation(patch, layer.weight_row(static_cast<int>(n)),
                                        static_cast<size_t>(fan_in), layer.rbf_sigma);
            } else if (ok) {
                const float* w = layer.weight_row(static_cast<int>(n));
                double dot = 0.0;
                for (int i = 0; i < fan_in; ++i) dot += static_cast<double>(w[i]) * patch[i];
                raw[n] = static_cast<float>(dot);
            }
        }
    });
    std::vector<float> act = minmax_normalize(raw);
    if (variant == Variant::Li || variant == Variant::LiDogRgb) {
        act = lateral_inhibition(act, g.grid, inhibition);
    }
    if (capture) capture->activations = act;
    return act;
}

std::vector<std::vector<float>> forward_network(const NetworkState& net, const FeatureStack& stack) {
    if (net.layers.empty()) throw RuntimeFailure("forward_network: empty network");
    if (stack.height != stack.width || stack.height != net.layers.front().geometry.grid ||
        stack.channels != net.layers.front().geometry.in_channels) {
        throw RuntimeFailure("forward_network: feature stack does not match layer-1 geometry");
    }
    std::vector<std::vector<float>> acts;
    acts.reserve(net.layers.size());
    const float* input = stack.data.data();
    int in_side = stack.height;
    int in_channels = stack.channels;
    for (const LayerState& layer : net.layers) {
        acts.push_back(forward_layer(layer, input, in_side, in_channels, net.variant, net.inhibition));
        input = acts.back().data();
        in_side = layer.geometry.grid;
        in_channels = 1;
    }
    return acts;
}

NetworkState make_network(Variant variant, StackProvenance frontend, int grid, int stack_channels,
                          const std::vector<int>& patches, const InhibitionParams& inhibition,
                          float rbf_sigma, uint64_t seed) {
    if (patches.empty()) throw ParamError("layer.patches: must name at least one layer");
    for (int p : patches) {
        if (p < 2 || p > grid) throw ParamError("layer.patches: each patch must be in [2, grid]");
    }
    NetworkState net;
    net.variant = variant;
    net.frontend = frontend;
    net.inhibition = inhibition;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> uni(0.0f, 1.0f);
    int in_channels = stack_channels;
    for (int p : patches) {
        LayerState layer;
        layer.geometry = LayerGeometry{grid, p, in_channels};
        layer.rbf_sigma = rbf_sigma;
        layer.weights.resize(static_cast<size_t>(layer.geometry.neurons()) * layer.geometry.fan_in());
        layer.traces.assign(layer.geometry.neurons(), 0.0f);
        for (float& w : layer.weights) w = uni(rng);
        for (int n = 0; n < layer.geometry.neurons(); ++n) {
            normalize_weights(layer.weight_row(n), layer.geometry.fan_in());
        }
        if (variant == Variant::Md) {
            layer.md_stats.emplace(static_cast<size_t>(layer.geometry.fan_in()));
        }
        net.layers.push_back(std::move(layer));
        in_channels = 1;
    }
    return net;
}

} // namespace visnet
