#pragma once

#include <string>
#include <vector>

#include "core/image.hpp"

namespace visnet {

enum class Split : uint8_t { Train = 0, Test = 1 };

struct LabeledDataset {
    std::vector<Image> images;
    std::vector<int> labels;
    std::vector<Split> split;
    std::vector<std::string> class_names;          // optional
    std::vector<float> measured_symmetry;          // generator datasets only
    std::vector<std::string> filenames;            // populated when written/read from disk

    size_t size() const { return images.size(); }
    int num_classes() const;
    std::vector<size_t> indices(Split s) const;
};

} // namespace visnet
