#pragma once

#include <vector>

#include "core/image.hpp"

namespace visnet {

enum class StackProvenance { GrayGabor, DogRgbGabor };

// Frontend responses, planar [C][H][W]. Values are non-negative (rectified).
struct FeatureStack {
    int height = 0;
    int width = 0;
    int channels = 0;
    StackProvenance provenance = StackProvenance::GrayGabor;
    std::vector<float> data;

    float* plane(int c) { return data.data() + static_cast<size_t>(c) * height * width; }
    const float* plane(int c) const { return data.data() + static_cast<size_t>(c) * height * width; }
};

struct GaborParams {
    std::vector<float> frequencies{0.2f, 0.4f, 0.6f, 0.8f}; // cycles/pixel
    std::vector<float> orientations{0.0f, 0.78539816339744831f, 1.5707963267948966f, 2.3561944901923449f};
    std::vector<float> phases{0.0f, 3.1415926535897931f};
    float sigma = 0.0f;  // envelope width in pixels; <= 0 means bandwidth-linked 0.56/f
    float gamma = 0.5f;  // aspect ratio
    int kernel_size = 15;

    int bank_size() const {
        return static_cast<int>(frequencies.size() * orientations.size() * phases.size());
    }
};

struct DogParams {
    float sigma1 = 1.0f;
    float sigma2 = 1.2f;
    float k = 0.6f; // surround strength
    int kernel_size = 3;
};

struct OpponentChannels {
    int height = 0;
    int width = 0;
    std::vector<float> L;  // luminance, (R+G+B)/3
    std::vector<float> RG; // R - G
    std::vector<float> BG; // B - G
};

struct GaborKernel {
    float frequency = 0.0f;
    float orientation = 0.0f;
    float phase = 0.0f;
    int size = 0;
    std::vector<float> taps; // size x size, mean-subtracted then L2-normalized
};

// One kernel per (frequency, orientation, phase) triple, in that loop order.
std::vector<GaborKernel> make_gabor_bank(const GaborParams& params);

// Convolve a grayscale image against the bank, rectify with |.|, resample
// each response map to out_size x out_size.
FeatureStack gabor_frontend(const Image& gray, const std::vector<GaborKernel>& bank, int out_size);

OpponentChannels opponent_channels(const Image& rgb);

// Truncated unit-sum Gaussians differenced as (G_sigma1 - k * G_sigma2),
// applied as one convolution with zero-padded borders.
std::vector<float> dog_filter(const float* channel, int h, int w, const DogParams& params);

// Builds the DoG kernel itself (kernel_size x kernel_size); exposed for tests.
std::vector<float> make_dog_kernel(const DogParams& params);

// Opponent decomposition -> per-channel DoG -> per-channel Gabor pyramid,
// concatenated in order [L, RG, BG].
FeatureStack dog_rgb_frontend(const Image& rgb, const DogParams& dog,
                              const std::vector<GaborKernel>& bank, int out_size);

// Bound frontend configuration: everything needed to turn a raw image into
// the network's input stack.
class Frontend {
public:
    Frontend(StackProvenance provenance, const GaborParams& gabor, const DogParams& dog, int out_size);

    FeatureStack apply(const Image& img) const;

    StackProvenance provenance() const { return provenance_; }
    int out_size() const { return out_size_; }
    int channels() const;

private:
    StackProvenance provenance_;
    DogParams dog_;
    std::vector<GaborKernel> bank_;
    int out_size_;
};

} // namespace visnet
