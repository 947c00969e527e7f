#pragma once

#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/image.hpp"

namespace visnet {

// PGM (P5) for single-channel, PPM (P6) for RGB, maxval 255 only.
Image read_pnm(const std::string& path);
void write_pnm(const std::string& path, const Image& image);

// IDX-format MNIST pair (big-endian headers, magics 2051/2049).
LabeledDataset load_mnist(const std::string& images_path, const std::string& labels_path);

// Convenience: train + test pairs merged with split tags.
LabeledDataset load_mnist_split(const std::string& train_images, const std::string& train_labels,
                                const std::string& test_images, const std::string& test_labels);

// CIFAR-10 binary batches (3073-byte records, planes R,G,B of 1024 bytes).
// `train_paths` become the train split, `test_paths` the test split.
LabeledDataset load_cifar10(const std::vector<std::string>& train_paths,
                            const std::vector<std::string>& test_paths);

// (R+G+B)/3, matching the opponent L channel.
Image to_grayscale(const Image& rgb);

// Dataset directory round-trip: images as PGM/PPM next to a manifest.csv with
// header `filename,label,split,measured_symmetry`.
void write_dataset(const LabeledDataset& ds, const std::string& dir);
LabeledDataset load_dataset_dir(const std::string& dir);

// Seeded stratified subsample: up to per_class_train/test items per class.
LabeledDataset stratified_subset(const LabeledDataset& ds, int per_class_train, int per_class_test,
                                 uint64_t seed);

} // namespace visnet
