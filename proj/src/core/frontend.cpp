#include "core/frontend.hpp"

#include <cmath>
#include <numeric>

#include "core/errors.hpp"

namespace visnet {

static void validate(const GaborParams& p) {
    if (p.frequencies.empty()) throw ParamError("gabor.frequencies: must be non-empty");
    for (float f : p.frequencies) {
        if (!(f > 0.0f)) throw ParamError("gabor.frequencies: all values must be > 0");
    }
    if (p.orientations.empty()) throw ParamError("gabor.orientations: must be non-empty");
    if (p.phases.empty()) throw ParamError("gabor.phases: must be non-empty");
    if (p.kernel_size < 3 || p.kernel_size % 2 == 0) {
        throw ParamError("gabor.kernel_size: must be odd and >= 3");
    }
    if (!(p.gamma > 0.0f)) throw ParamError("gabor.gamma: must be > 0");
}

std::vector<GaborKernel> make_gabor_bank(const GaborParams& params) {
    validate(params);
    std::vector<GaborKernel> bank;
    bank.reserve(params.bank_size());
    const int n = params.kernel_size;
    const int half = n / 2;
    for (float f : params.frequencies) {
        const float sigma = params.sigma > 0.0f ? params.sigma : 0.56f / f;
        for (float theta : params.orientations) {
            const float ct = std::cos(theta);
            const float st = std::sin(theta);
            for (float phi : params.phases) {
                GaborKernel k;
                k.frequency = f;
                k.orientation = theta;
                k.phase = phi;
                k.size = n;
                k.taps.resize(static_cast<size_t>(n) * n);
                for (int y = -half; y <= half; ++y) {
                    for (int x = -half; x <= half; ++x) {
                        const float xr = x * ct + y * st;
                        const float yr = -x * st + y * ct;
                        const float env = std::exp(-(xr * xr + params.gamma * params.gamma * yr * yr) /
                                                   (2.0f * sigma * sigma));
                        const float carrier = std::cos(2.0f * static_cast<float>(M_PI) * f * xr + phi);
                        k.taps[static_cast<size_t>(y + half) * n + (x + half)] = env * carrier;
                    }
                }
                // Kill the DC term, then scale to unit energy.
                const double mean = std::accumulate(k.taps.begin(), k.taps.end(), 0.0) / k.taps.size();
                double sq = 0.0;
                for (float& t : k.taps) {
                    t -= static_cast<float>(mean);
                    sq += static_cast<double>(t) * t;
                }
                const double norm = std::sqrt(sq);
                if (norm > 0.0) {
                    for (float& t : k.taps) t = static_cast<float>(t / norm);
                }
                bank.push_back(std::move(k));
            }
        }
    }
    return bank;
}

FeatureStack gabor_frontend(const Image& gray, const std::vector<GaborKernel>& bank, int out_size) {
    if (gray.empty()) throw ParamError("gabor_frontend: empty image");
    if (gray.channels != 1) throw ParamError("gabor_frontend: expected a single-channel image");
    if (out_size < gray.width || out_size < gray.height) {
        throw ParamError("gabor_frontend: out_size must be >= image side");
    }
    FeatureStack stack;
    stack.height = out_size;
    stack.width = out_size;
    stack.channels = static_cast<int>(bank.size());
    stack.provenance = StackProvenance::GrayGabor;
    stack.data.resize(static_cast<size_t>(out_size) * out_size * bank.size());
    for (size_t c = 0; c < bank.size(); ++c) {
        auto resp = conv2_same(gray.plane(0), gray.height, gray.width,
                               bank[c].taps.data(), bank[c].size, bank[c].size);
        for (float& v : resp) v = std::fabs(v);
        auto resized = resize_bilinear(resp.data(), gray.height, gray.width, out_size, out_size);
        std::copy(resized.begin(), resized.end(), stack.plane(static_cast<int>(c)));
    }
    return stack;
}

OpponentChannels opponent_channels(const Image& rgb) {
    if (rgb.channels != 3) throw ParamError("opponent_channels: expected exactly 3 color planes");
    OpponentChannels oc;
    oc.height = rgb.height;
    oc.width = rgb.width;
    const size_t n = static_cast<size_t>(rgb.height) * rgb.width;
    oc.L.resize(n);
    oc.RG.resize(n);
    oc.BG.resize(n);
    const float* r = rgb.plane(0);
    const float* g = rgb.plane(1);
    const float* b = rgb.plane(2);
    for (size_t i = 0; i < n; ++i) {
        oc.L[i] = (r[i] + g[i] + b[i]) / 3.0f;
        oc.RG[i] = r[i] - g[i];
        oc.BG[i] = b[i] - g[i];
    }
    return oc;
}

static void validate(const DogParams& p) {
    if (p.kernel_size < 1 || p.kernel_size % 2 == 0) throw ParamError("dog.kernel_size: must be odd and >= 1");
    if (!(p.sigma1 > 0.0f) || !(p.sigma2 > 0.0f)) throw ParamError("dog.sigma: must be > 0");
    if (p.sigma1 > p.sigma2) throw ParamError("dog.sigma1: must be <= sigma2");
    if (p.k < 0.0f || p.k > 1.0f) throw ParamError("dog.k: must be in [0,1]");
}

static std::vector<float> unit_gaussian(float sigma, int n) {
    std::vector<float> g(static_cast<size_t>(n) * n);
    const int half = n / 2;
    double sum = 0.0;
    for (int y = -half; y <= half; ++y) {
        for (int x = -half; x <= half; ++x) {
            const double v = std::exp(-(static_cast<double>(x) * x + static_cast<double>(y) * y) /
                                      (2.0 * sigma * sigma));
            g[static_cast<size_t>(y + half) * n + (x + half)] = static_cast<float>(v);
            sum += v;
        }
    }
    for (float& v : g) v = static_cast<float>(v / sum);
    return g;
}

std::vector<float> make_dog_kernel(const DogParams& params) {
    validate(params);
    auto center = unit_gaussian(params.sigma1, params.kernel_size);
    auto surround = unit_gaussian(params.sigma2, params.kernel_size);
    for (size_t i = 0; i < center.size(); ++i) center[i] -= params.k * surround[i];
    return center;
}

std::vector<float> dog_filter(const float* channel, int h, int w, const DogParams& params) {
    if (params.kernel_size > std::min(h, w)) {
        throw ParamError("dog.kernel_size: exceeds image side");
    }
    auto kernel = make_dog_kernel(params);
    return conv2_same(channel, h, w, kernel.data(), params.kernel_size, params.kernel_size);
}

FeatureStack dog_rgb_frontend(const Image& rgb, const DogParams& dog,
                              const std::vector<GaborKernel>& bank, int out_size) {
    auto oc = opponent_channels(rgb);
    const std::vector<float>* planes[3] = {&oc.L, &oc.RG, &oc.BG};
    FeatureStack stack;
    stack.height = out_size;
    stack.width = out_size;
    stack.channels = static_cast<int>(3 * bank.size());
    stack.provenance = StackProvenance::DogRgbGabor;
    stack.data.resize(static_cast<size_t>(out_size) * out_size * stack.channels);
    Image filtered(rgb.height, rgb.width, 1);
    for (int p = 0; p < 3; ++p) {
        auto dogged = dog_filter(planes[p]->data(), rgb.height, rgb.width, dog);
        std::copy(dogged.begin(), dogged.end(), filtered.plane(0));
        FeatureStack sub = gabor_frontend(filtered, bank, out_size);
        std::copy(sub.data.begin(), sub.data.end(),
                  stack.data.begin() + static_cast<size_t>(p) * sub.data.size());
    }
    return stack;
}

Frontend::Frontend(StackProvenance provenance, const GaborParams& gabor, const DogParams& dog, int out_size)
    : provenance_(provenance), dog_(dog), bank_(make_gabor_bank(gabor)), out_size_(out_size) {
    if (provenance == StackProvenance::DogRgbGabor) validate(dog);
}

int Frontend::channels() const {
    return provenance_ == StackProvenance::GrayGabor ? static_cast<int>(bank_.size())
                                                     : static_cast<int>(3 * bank_.size());
}

FeatureStack Frontend::apply(const Image& img) const {
    if (provenance_ == StackProvenance::GrayGabor) {
        if (img.channels == 1) return gabor_frontend(img, bank_, out_size_);
        // RGB input through the grayscale path collapses to the L channel.
        Image gray(img.height, img.width, 1);
        const float* r = img.plane(0);
        const float* g = img.plane(1);
        const float* b = img.plane(2);
        float* d = gray.plane(0);
        for (size_t i = 0; i < gray.data.size(); ++i) d[i] = (r[i] + g[i] + b[i]) / 3.0f;
        return gabor_frontend(gray, bank_, out_size_);
    }
    if (img.channels != 3) {
        throw ParamError("frontend: dog-rgb-gabor requires a 3-plane RGB input");
    }
    return dog_rgb_frontend(img, dog_, bank_, out_size_);
}

} // namespace visnet
