#include "core/dataset.hpp"

#include <algorithm>

namespace visnet {

int LabeledDataset::num_classes() const {
    int mx = -1;
    for (int l : labels) mx = std::max(mx, l);
    return mx + 1;
}

std::vector<size_t> LabeledDataset::indices(Split s) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < split.size(); ++i) {
        if (split[i] == s) out.push_back(i);
    }
    return out;
}

} // namespace visnet
