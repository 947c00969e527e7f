#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/learning.hpp"
#include "core/network.hpp"

namespace visnet {

struct ReadoutHyper {
    float lambda = 1e-4f; // L2 regularization
    int epochs = 50;
    uint64_t seed = 7;
};

struct LinearModel {
    int classes = 0;
    int dim = 0;
    std::vector<float> weights; // classes x dim, row-major
    std::vector<float> biases;  // classes
    ReadoutHyper hyper;

    float* row(int c) { return weights.data() + static_cast<size_t>(c) * dim; }
    const float* row(int c) const { return weights.data() + static_cast<size_t>(c) * dim; }
};

struct FeatureMatrix {
    size_t rows = 0;
    size_t dim = 0;
    std::vector<float> data; // rows x dim

    const float* row(size_t r) const { return data.data() + r * dim; }
};

// Top-layer activations, one flattened row per image. Pure with respect to
// the network.
FeatureMatrix extract_features(const NetworkState& net, const Frontend& frontend,
                               const LabeledDataset& dataset, const std::vector<size_t>& items);

// One-vs-rest hinge loss with L2 regularization, deterministic seeded
// subgradient descent (Pegasos-style 1/(lambda*t) steps). The training rows
// are visited in a canonical content-sorted order, so any permutation of the
// input yields the identical model.
LinearModel train_linear(const FeatureMatrix& features, const std::vector<int>& labels,
                         const ReadoutHyper& hyper);

// Argmax accuracy; score ties broken by the lowest class index.
float evaluate(const LinearModel& model, const FeatureMatrix& features,
               const std::vector<int>& labels);

struct ExperimentResult {
    std::string dataset;
    std::string variant;
    std::vector<float> per_seed; // accuracies
    size_t train_size = 0;
    size_t test_size = 0;

    float mean() const;
    float sd() const; // population SD over the per-seed list
};

} // namespace visnet
