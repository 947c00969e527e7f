#include "core/image.hpp"

#include <cmath>

namespace visnet {

std::vector<float> conv2_same(const float* src, int h, int w,
                              const float* kernel, int kh, int kw) {
    std::vector<float> out(static_cast<size_t>(h) * w, 0.0f);
    const int cy = kh / 2;
    const int cx = kw / 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int ky0 = std::max(0, cy - y);
            const int ky1 = std::min(kh, h - y + cy);
            const int kx0 = std::max(0, cx - x);
            const int kx1 = std::min(kw, w - x + cx);
            const int span = kx1 - kx0;
            // Four partial sums break the add latency chain; order is still
            // deterministic, and tests compare against the naive loop with a
            // relative tolerance.
            float a0 = 0.0f, a1 = 0.0f, a2 = 0.0f, a3 = 0.0f;
            for (int ky = ky0; ky < ky1; ++ky) {
                const float* srow = src + static_cast<size_t>(y + ky - cy) * w + (x + kx0 - cx);
                const float* krow = kernel + static_cast<size_t>(ky) * kw + kx0;
                int i = 0;
                for (; i + 4 <= span; i += 4) {
                    a0 += krow[i] * srow[i];
                    a1 += krow[i + 1] * srow[i + 1];
                    a2 += krow[i + 2] * srow[i + 2];
                    a3 += krow[i + 3] * srow[i + 3];
                }
                for (; i < span; ++i) a0 += krow[i] * srow[i];
            }
            out[static_cast<size_t>(y) * w + x] = (a0 + a1) + (a2 + a3);
        }
    }
    return out;
}

static float sample_bilinear(const float* src, int h, int w, float fy, float fx) {
    const int y0 = static_cast<int>(std::floor(fy));
    const int x0 = static_cast<int>(std::floor(fx));
    const float dy = fy - static_cast<float>(y0);
    const float dx = fx - static_cast<float>(x0);
    auto px = [&](int y, int x) -> float {
        if (y < 0 || x < 0 || y >= h || x >= w) return 0.0f;
        return src[static_cast<size_t>(y) * w + x];
    };
    return (1.0f - dy) * ((1.0f - dx) * px(y0, x0) + dx * px(y0, x0 + 1)) +
           dy * ((1.0f - dx) * px(y0 + 1, x0) + dx * px(y0 + 1, x0 + 1));
}

std::vector<float> resize_bilinear(const float* src, int h, int w, int out_h, int out_w) {
    std::vector<float> out(static_cast<size_t>(out_h) * out_w, 0.0f);
    if (out_h == h && out_w == w) {
        std::copy(src, src + static_cast<size_t>(h) * w, out.begin());
        return out;
    }
    const float sy = (out_h > 1) ? static_cast<float>(h - 1) / static_cast<float>(out_h - 1) : 0.0f;
    const float sx = (out_w > 1) ? static_cast<float>(w - 1) / static_cast<float>(out_w - 1) : 0.0f;
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            out[static_cast<size_t>(y) * out_w + x] = sample_bilinear(src, h, w, sy * y, sx * x);
        }
    }
    return out;
}

Image rotate_translate(const Image& img, float rotation_deg,
                       float translate_frac_x, float translate_frac_y) {
    Image out(img.height, img.width, img.channels);
    const float rad = rotation_deg * static_cast<float>(M_PI) / 180.0f;
    const float cr = std::cos(rad);
    const float sr = std::sin(rad);
    const float cy = (img.height - 1) * 0.5f;
    const float cx = (img.width - 1) * 0.5f;
    const float tx = translate_frac_x * img.width;
    const float ty = translate_frac_y * img.height;
    for (int c = 0; c < img.channels; ++c) {
        const float* src = img.plane(c);
        float* dst = out.plane(c);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                // Inverse map: undo translation, then rotate backwards.
                const float ux = static_cast<float>(x) - tx - cx;
                const float uy = static_cast<float>(y) - ty - cy;
                const float fx = cr * ux + sr * uy + cx;
                const float fy = -sr * ux + cr * uy + cy;
                float v = 0.0f;
                if (fy >= 0.0f && fx >= 0.0f && fy <= static_cast<float>(img.height - 1) &&
                    fx <= static_cast<float>(img.width - 1)) {
                    v = sample_bilinear(src, img.height, img.width, fy, fx);
                }
                dst[static_cast<size_t>(y) * img.width + x] = v;
            }
        }
    }
    return out;
}

Image mirror_horizontal(const Image& img) {
    Image out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
            }
        }
    }
    return out;
}

} // namespace visnet
