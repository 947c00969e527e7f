#pragma once

#include <cstddef>
#include <vector>

namespace visnet {

// Planar float image: data laid out channel-major, [c][y][x].
// Pixel values are kept in [0,1] by every producer in this codebase.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<float> data;

    Image() = default;
    Image(int h, int w, int c = 1) : height(h), width(w), channels(c), data(static_cast<size_t>(h) * w * c, 0.0f) {}

    float& at(int c, int y, int x) { return data[(static_cast<size_t>(c) * height + y) * width + x]; }
    float at(int c, int y, int x) const { return data[(static_cast<size_t>(c) * height + y) * width + x]; }

    float* plane(int c) { return data.data() + static_cast<size_t>(c) * height * width; }
    const float* plane(int c) const { return data.data() + static_cast<size_t>(c) * height * width; }

    bool empty() const { return data.empty(); }
};

// Same-size 2-D convolution with zero padding outside the image.
// Kernel is kh x kw row-major, anchored at its center.
std::vector<float> conv2_same(const float* src, int h, int w,
                              const float* kernel, int kh, int kw);

// Bilinear resample of one plane to out_h x out_w.
std::vector<float> resize_bilinear(const float* src, int h, int w, int out_h, int out_w);

// Rotation about the image center (bilinear, zero fill) followed by a
// translation given as a fraction of the image side per axis.
// Applies to every channel. Rotation in degrees, positive = counterclockwise.
Image rotate_translate(const Image& img, float rotation_deg,
                       float translate_frac_x, float translate_frac_y);

// Horizontal mirror (flip about the vertical axis), all channels.
Image mirror_horizontal(const Image& img);

} // namespace visnet
