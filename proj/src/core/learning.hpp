#pragma once

#include <cstdint>

#include "core/dataset.hpp"
#include "core/network.hpp"

namespace visnet {

enum class SequenceMode : uint8_t {
    Jitter,   // views are rotation/translation jitters of one image
    SameClass // views are distinct exemplars of the object's class
};

struct LearningParams {
    float alpha = 0.01f;    // learning rate
    float eta = 0.8f;       // trace persistence
    int epochs = 5;
    int sequence_length = 5;
    uint64_t seed = 1;
    Variant variant = Variant::Simplified;
};

struct TrainOptions {
    LearningParams params;
    SequenceMode mode = SequenceMode::Jitter;
    float rotation_range = 0.0f;    // degrees, jitter drawn from [-r, r]
    float translation_range = 0.0f; // fraction of side, per axis
    int objects_per_epoch = 0;      // 0 = every training object each epoch
};

// (1 - eta) * y + eta * prev.
float trace_update(float prev_trace, float y, float eta);

// w <- normalize(w + alpha * trace * x). Returns false if the update left a
// zero vector, in which case w is untouched and the caller reinitializes.
bool hebbian_trace_step(float* w, const float* x, size_t n, float trace, float alpha);

double mahalanobis_distance(const float* x, size_t n, const MahalanobisStats& stats);

// (1/D) * Sigma^-1 (x - mu), zero vector when D <= delta.
std::vector<float> mahalanobis_gradient(const float* x, size_t n, const MahalanobisStats& stats,
                                        double delta = 1e-9);

// w <- normalize(w + alpha * (grad D - w)).
bool md_weight_step(float* w, const float* x, size_t n, const MahalanobisStats& stats, float alpha);

// Welford online update with the variance floor applied on read.
void update_running_stats(MahalanobisStats& stats, const float* x, size_t n);

// The unsupervised loop: epochs x shuffled objects x sequences of views,
// traces reset at each sequence start, weights updated layer by layer.
void train_network(NetworkState& net, const Frontend& frontend, const LabeledDataset& dataset,
                   const TrainOptions& options);

} // namespace visnet
