#include "core/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace visnet {

float trace_update(float prev_trace, float y, float eta) {
    return (1.0f - eta) * y + eta * prev_trace;
}

bool hebbian_trace_step(float* w, const float* x, size_t n, float trace, float alpha) {
    if (alpha * trace == 0.0f) return true; // no increment, row already unit-norm
    const float a = alpha * trace;
    double sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const float updated = w[i] + a * x[i];
        w[i] = updated;
        sq += static_cast<double>(updated) * updated;
    }
    if (sq <= 0.0) return false; // caller reinitializes the row
    const float inv = static_cast<float>(1.0 / std::sqrt(sq));
    for (size_t i = 0; i < n; ++i) w[i] *= inv;
    return true;
}

double mahalanobis_distance(const float* x, size_t n, const MahalanobisStats& stats) {
    if (n != stats.mean.size()) throw ParamError("mahalanobis_distance: dimension mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(x[i]) - stats.mean[i];
        acc += d * d / stats.variance(i);
    }
    return std::sqrt(acc);
}

std::vector<float> mahalanobis_gradient(const float* x, size_t n, const MahalanobisStats& stats,
                                        double delta) {
    const double dist = mahalanobis_distance(x, n, stats);
    std::vector<float> grad(n, 0.0f);
    if (dist <= delta) return grad;
    const double inv = 1.0 / dist;
    for (size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(x[i]) - stats.mean[i];
        grad[i] = static_cast<float>(inv * d / stats.variance(i));
    }
    return grad;
}

bool md_weight_step(float* w, const float* x, size_t n, const MahalanobisStats& stats, float alpha) {
    if (alpha == 0.0f) return true;
    const std::vector<float> grad = mahalanobis_gradient(x, n, stats);
    double sq = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const float updated = w[i] + alpha * (grad[i] - w[i]);
        sq += static_cast<double>(updated) * updated;
    }
    if (sq <= 0.0) return false;
    const float inv = static_cast<float>(1.0 / std::sqrt(sq));
    for (size_t i = 0; i < n; ++i) w[i] = (w[i] + alpha * (grad[i] - w[i])) * inv;
    return true;
}

void update_running_stats(MahalanobisStats& stats, const float* x, size_t n) {
    if (n != stats.mean.size()) throw ParamError("update_running_stats: dimension mismatch");
    stats.count += 1;
    const double inv_count = 1.0 / static_cast<double>(stats.count);
    for (size_t i = 0; i < n; ++i) {
        const double delta = static_cast<double>(x[i]) - stats.mean[i];
        stats.mean[i] += delta * inv_count;
        stats.m2[i] += delta * (static_cast<double>(x[i]) - stats.mean[i]);
    }
}

static void validate(const TrainOptions& o) {
    if (!(o.params.alpha >= 0.0f)) throw ParamError("alpha: must be >= 0");
    if (o.params.eta < 0.0f || o.params.eta > 1.0f) throw ParamError("eta: must be in [0,1]");
    if (o.params.sequence_length < 1) throw ParamError("sequence_length: must be >= 1");
    if (o.params.epochs < 0) throw ParamError("epochs: must be >= 0");
}

static void reinitialize_row(float* w, size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<float> uni(0.0f, 1.0f);
    for (size_t i = 0; i < n; ++i) w[i] = uni(rng);
    normalize_weights(w, n);
}

void train_network(NetworkState& net, const Frontend& frontend, const LabeledDataset& dataset,
                   const TrainOptions& options) {
    validate(options);
    std::vector<size_t> train_idx = dataset.indices(Split::Train);
    if (train_idx.empty()) throw ParamError("train_network: dataset has no training items");

    const LearningParams& lp = options.params;
    std::mt19937_64 rng(lp.seed);
    std::mt19937_64 reinit_rng(lp.seed ^ 0x9e3779b97f4a7c15ull);

    // Same-class exemplar pools for benchmark datasets.
    std::vector<std::vector<size_t>> by_class;
    if (options.mode == SequenceMode::SameClass) {
        by_class.resize(static_cast<size_t>(std::max(1, dataset.num_classes())));
        for (size_t i : train_idx) by_class[static_cast<size_t>(dataset.labels[i])].push_back(i);
    }

    std::vector<LayerForward> captures(net.layers.size());
    for (int epoch = 0; epoch < lp.epochs; ++epoch) {
        std::vector<size_t> order = train_idx;
        std::shuffle(order.begin(), order.end(), rng);
        if (options.objects_per_epoch > 0 &&
            order.size() > static_cast<size_t>(options.objects_per_epoch)) {
            order.resize(static_cast<size_t>(options.objects_per_epoch));
        }
        for (size_t obj : order) {
            for (LayerState& layer : net.layers) {
                std::fill(layer.traces.begin(), layer.traces.end(), 0.0f);
            }
            for (int v = 0; v < lp.sequence_length; ++v) {
                Image view;
                if (v == 0) {
                    view = dataset.images[obj];
                } else if (options.mode == SequenceMode::Jitter) {
                    std::uniform_real_distribution<float> rot(-options.rotation_range,
                                                              options.rotation_range);
                    std::uniform_real_distribution<float> tr(-options.translation_range,
                                                             options.translation_range);
                    const float r = rot(rng);
                    const float tx = tr(rng);
                    const float ty = tr(rng);
                    view = rotate_translate(dataset.images[obj], r, tx, ty);
                } else {
                    const auto& pool = by_class[static_cast<size_t>(dataset.labels[obj])];
                    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
                    view = dataset.images[pool[pick(rng)]];
                }
                const FeatureStack stack = frontend.apply(view);
                const float* input = stack.data.data();
                int in_side = stack.height;
                int in_channels = stack.channels;
                for (size_t l = 0; l < net.layers.size(); ++l) {
                    LayerState& layer = net.layers[l];
                    LayerForward& fwd = captures[l];
                    forward_layer(layer, input, in_side, in_channels, net.variant, net.inhibition,
                                  &fwd);
                    const int fan_in = layer.geometry.fan_in();
                    const size_t neurons = static_cast<size_t>(layer.geometry.neurons());
                    if (net.variant == Variant::Md) {
                        MahalanobisStats& stats = *layer.md_stats;
                        for (size_t n = 0; n < neurons; ++n) {
                            update_running_stats(stats, fwd.patches.data() + n * fan_in,
                                                 static_cast<size_t>(fan_in));
                        }
                    }
                    std::vector<uint8_t> degenerate(neurons, 0);
                    parallel_for(neurons, [&](size_t begin, size_t end) {
                        for (size_t n = begin; n < end; ++n) {
                            layer.traces[n] =
                                trace_update(layer.traces[n], fwd.activations[n], lp.eta);
                            const float* x = fwd.patches.data() + n * fan_in;
                            float* w = layer.weight_row(static_cast<int>(n));
                            bool ok;
                            if (net.variant == Variant::Md) {
                                ok = md_weight_step(w, x, static_cast<size_t>(fan_in),
                                                    *layer.md_stats, lp.alpha);
                            } else {
                                ok = hebbian_trace_step(w, x, static_cast<size_t>(fan_in),
                                                        layer.traces[n], lp.alpha);
                            }
                            if (!ok) degenerate[n] = 1;
                        }
                    });
                    for (size_t n = 0; n < neurons; ++n) {
                        if (degenerate[n]) {
                            std::fprintf(stderr,
                                         "warning: layer %zu neuron %zu collapsed to zero, "
                                         "reinitializing\n",
                                         l + 1, n);
                            reinitialize_row(layer.weight_row(static_cast<int>(n)),
                                             static_cast<size_t>(fan_in), reinit_rng);
                        }
                    }
                    input = fwd.activations.data();
                    in_side = layer.geometry.grid;
                    in_channels = 1;
                }
            }
        }
    }
}

} // namespace visnet
