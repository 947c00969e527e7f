#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/frontend.hpp"

namespace visnet {

enum class Variant : uint8_t { Simplified = 0, Rbf = 1, Md = 2, Li = 3, LiDogRgb = 4 };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct LayerGeometry {
    int grid = 80;        // neurons per side
    int patch = 6;        // receptive-field side in presynaptic units
    int in_channels = 32; // presynaptic channel count

    int neurons() const { return grid * grid; }
    int fan_in() const { return patch * patch * in_channels; }
};

struct InhibitionParams {
    int radius = 2;       // neighborhood half-width
    float strength = 0.5f; // beta in [0,1]
};

// Online per-dimension mean/variance over patch inputs, shared across the
// neurons of one layer. Variance floored to keep the diagonal invertible.
struct MahalanobisStats {
    std::vector<double> mean;
    std::vector<double> m2; // sum of squared deviations (Welford)
    uint64_t count = 0;
    double floor = 1e-6;

    explicit MahalanobisStats(size_t dim = 0) : mean(dim, 0.0), m2(dim, 0.0) {}
    double variance(size_t i) const {
        const double v = count > 1 ? m2[i] / static_cast<double>(count) : 0.0;
        return v < floor ? floor : v;
    }
};

struct LayerState {
    LayerGeometry geometry;
    std::vector<float> weights; // neurons x fan_in, row-major, unit-norm rows
    std::vector<float> traces;  // per-neuron trace
    float rbf_sigma = 0.5f;
    std::optional<MahalanobisStats> md_stats;

    float* weight_row(int n) { return weights.data() + static_cast<size_t>(n) * geometry.fan_in(); }
    const float* weight_row(int n) const { return weights.data() + static_cast<size_t>(n) * geometry.fan_in(); }
};

struct NetworkState {
    std::vector<LayerState> layers;
    Variant variant = Variant::Simplified;
    StackProvenance frontend = StackProvenance::GrayGabor;
    InhibitionParams inhibition;
};

// Map x into [0,1]; all zeros when max == min.
std::vector<float> minmax_normalize(const std::vector<float>& values);

// w / ||w||2. Throws RuntimeFailure on a zero vector.
void normalize_weights(float* w, size_t n);

float rbf_activation(const float* x, const float* c, size_t n, float sigma);

// Subtract beta * (neighborhood mean excluding self), clamp at zero.
std::vector<float> lateral_inhibition(const std::vector<float>& activations, int side,
                                      const InhibitionParams& params);

// Optional per-presentation capture of the normalized patch inputs, consumed
// by the training loop so patches are gathered once per layer.
struct LayerForward {
    std::vector<float> patches;     // neurons x fan_in, L2-normalized
    std::vector<float> activations; // post Min-Max (and inhibition, when active)
};

// input is planar [in_channels][in_side][in_side].
std::vector<float> forward_layer(const LayerState& layer, const float* input, int in_side,
                                 int in_channels, Variant variant,
                                 const InhibitionParams& inhibition,
                                 LayerForward* capture = nullptr);

// Sequential pass over all layers; returns each layer's activation grid.
std::vector<std::vector<float>> forward_network(const NetworkState& net, const FeatureStack& stack);

// Four layers with the given grid and patch schedule, seeded uniform [0,1)
// weights normalized row-wise.
NetworkState make_network(Variant variant, StackProvenance frontend, int grid, int stack_channels,
                          const std::vector<int>& patches, const InhibitionParams& inhibition,
                          float rbf_sigma, uint64_t seed);

} // namespace visnet
