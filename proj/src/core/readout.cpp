#include "core/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace visnet {

FeatureMatrix extract_features(const NetworkState& net, const Frontend& frontend,
                               const LabeledDataset& dataset, const std::vector<size_t>& items) {
    if (net.layers.empty()) throw ParamError("extract_features: empty network");
    FeatureMatrix fm;
    fm.rows = items.size();
    fm.dim = static_cast<size_t>(net.layers.back().geometry.neurons());
    fm.data.resize(fm.rows * fm.dim);
    parallel_for(items.size(), [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            const FeatureStack stack = frontend.apply(dataset.images[items[i]]);
            const auto acts = forward_network(net, stack);
            std::copy(acts.back().begin(), acts.back().end(), fm.data.begin() + i * fm.dim);
        }
    });
    return fm;
}

// Canonical row order: lexicographic by feature vector, then label. Makes the
// SGD visit sequence independent of how the caller happened to order rows.
static std::vector<size_t> canonical_order(const FeatureMatrix& f, const std::vector<int>& labels) {
    std::vector<size_t> order(f.rows);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const float* ra = f.row(a);
        const float* rb = f.row(b);
        for (size_t i = 0; i < f.dim; ++i) {
            if (ra[i] != rb[i]) return ra[i] < rb[i];
        }
        return labels[a] < labels[b];
    });
    return order;
}

LinearModel train_linear(const FeatureMatrix& features, const std::vector<int>& labels,
                         const ReadoutHyper& hyper) {
    if (features.rows == 0 || features.rows != labels.size()) {
        throw ParamError("train_linear: empty or mismatched training set");
    }
    const int classes = 1 + *std::max_element(labels.begin(), labels.end());
    if (classes < 2) throw ParamError("train_linear: need at least 2 classes");
    if (!(hyper.lambda > 0.0f)) throw ParamError("readout.lambda: must be > 0");

    LinearModel model;
    model.classes = classes;
    model.dim = static_cast<int>(features.dim);
    model.weights.assign(static_cast<size_t>(classes) * features.dim, 0.0f);
    model.biases.assign(static_cast<size_t>(classes), 0.0f);
    model.hyper = hyper;

    const std::vector<size_t> base = canonical_order(features, labels);

    // Per-feature standardization, fit on the training rows. Layer activations
    // can carry class signal at a tiny scale (min-max compresses deep layers),
    // where raw-scale hinge descent stalls at the majority class. Stats are
    // accumulated in canonical order so the fit is permutation-invariant; the
    // transform is folded back into the returned weights below, so the model
    // scores raw features.
    std::vector<double> mu(features.dim, 0.0), sd(features.dim, 0.0);
    for (size_t idx : base) {
        const float* x = features.row(idx);
        for (size_t i = 0; i < features.dim; ++i) mu[i] += x[i];
    }
    for (size_t i = 0; i < features.dim; ++i) mu[i] /= static_cast<double>(features.rows);
    for (size_t idx : base) {
        const float* x = features.row(idx);
        for (size_t i = 0; i < features.dim; ++i) {
            const double d = static_cast<double>(x[i]) - mu[i];
            sd[i] += d * d;
        }
    }
    for (size_t i = 0; i < features.dim; ++i) {
        sd[i] = std::max(std::sqrt(sd[i] / static_cast<double>(features.rows)), 1e-6);
    }
    FeatureMatrix zed;
    zed.rows = features.rows;
    zed.dim = features.dim;
    zed.data.resize(features.data.size());
    for (size_t r = 0; r < features.rows; ++r) {
        const float* x = features.row(r);
        float* z = zed.data.data() + r * zed.dim;
        for (size_t i = 0; i < features.dim; ++i) {
            z[i] = static_cast<float>((static_cast<double>(x[i]) - mu[i]) / sd[i]);
        }
    }

    std::vector<size_t> visit(base.size());
    long t = 1;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        // Reshuffle the canonical order with a seed that depends only on
        // (hyper.seed, epoch), never on the caller's row order.
        visit = base;
        std::mt19937_64 rng(hyper.seed + static_cast<uint64_t>(epoch) * 0x9e3779b97f4a7c15ull);
        std::shuffle(visit.begin(), visit.end(), rng);
        for (size_t idx : visit) {
            const float* x = zed.row(idx);
            const float step = 1.0f / (hyper.lambda * static_cast<float>(t));
            ++t;
            for (int c = 0; c < classes; ++c) {
                const float y = labels[idx] == c ? 1.0f : -1.0f;
                float* w = model.row(c);
                double score = model.biases[static_cast<size_t>(c)];
                for (size_t i = 0; i < features.dim; ++i) score += static_cast<double>(w[i]) * x[i];
                // The bias is treated as a weight on a constant-1 feature and
                // regularized with the rest; an unregularized bias keeps the
                // huge early 1/(lambda*t) steps forever and skews the
                // one-vs-rest argmax.
                const float shrink = 1.0f - step * hyper.lambda;
                for (size_t i = 0; i < features.dim; ++i) w[i] *= shrink;
                model.biases[static_cast<size_t>(c)] *= shrink;
                if (y * score < 1.0) {
                    const float g = step * y;
                    for (size_t i = 0; i < features.dim; ++i) w[i] += g * x[i];
                    model.biases[static_cast<size_t>(c)] += g;
                }
            }
        }
    }

    // Fold the standardization into the linear map: w'_i = w_i / sd_i,
    // b' = b - sum_i w_i * mu_i / sd_i, so inference uses raw features.
    for (int c = 0; c < classes; ++c) {
        float* w = model.row(c);
        double shift = 0.0;
        for (size_t i = 0; i < features.dim; ++i) {
            const double wi = static_cast<double>(w[i]) / sd[i];
            shift += wi * mu[i];
            w[i] = static_cast<float>(wi);
        }
        model.biases[static_cast<size_t>(c)] =
            static_cast<float>(model.biases[static_cast<size_t>(c)] - shift);
    }
    return model;
}

float evaluate(const LinearModel& model, const FeatureMatrix& features,
               const std::vector<int>& labels) {
    if (features.rows == 0 || features.rows != labels.size()) {
        throw ParamError("evaluate: empty or mismatched evaluation set");
    }
    if (static_cast<size_t>(model.dim) != features.dim) {
        throw ParamError("evaluate: feature dimension does not match the model");
    }
    size_t correct = 0;
    for (size_t r = 0; r < features.rows; ++r) {
        const float* x = features.row(r);
        int best = 0;
        double best_score = -1e300;
        for (int c = 0; c < model.classes; ++c) {
            const float* w = model.row(c);
            double score = model.biases[static_cast<size_t>(c)];
            for (size_t i = 0; i < features.dim; ++i) score += static_cast<double>(w[i]) * x[i];
            if (score > best_score) { // strict: ties keep the lowest class index
                best_score = score;
                best = c;
            }
        }
        if (best == labels[r]) ++correct;
    }
    return static_cast<float>(correct) / static_cast<float>(features.rows);
}

float ExperimentResult::mean() const {
    if (per_seed.empty()) return 0.0f;
    double acc = std::accumulate(per_seed.begin(), per_seed.end(), 0.0);
    return static_cast<float>(acc / per_seed.size());
}

float ExperimentResult::sd() const {
    if (per_seed.empty()) return 0.0f;
    const double m = mean();
    double var = 0.0;
    for (float a : per_seed) var += (a - m) * (a - m);
    return static_cast<float>(std::sqrt(var / per_seed.size()));
}

} // namespace visnet
