#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/image.hpp"

namespace visnet {

enum class Family : uint8_t { Square, Triangle, Parted, SomepartedSquare, HumanLike, RgbImage };
enum class Axis : uint8_t { Vertical, Horizontal };

Family family_from_name(const std::string& name);
std::string family_name(Family f);

struct SymmetrySpec {
    Family family = Family::Square;
    int levels = 5;      // 2 or 5
    int image_size = 32;
    int count = 1000;
    float rotation_range = 0.0f;    // degrees, subset of [-180, 180]
    float translation_range = 0.0f; // fraction of side, subset of [-0.2, 0.2]
    uint64_t seed = 1;
    int sierpinski_depth = 3;
    int n_splits = 3;
};

struct LabeledImage {
    Image pixels;
    int label = 0;
    float measured_symmetry = 1.0f; // in canonical pose, before any transform
};

// Mirror-match fraction over the object-union mask. Binary (single-channel)
// images use a 0.5 pixel threshold, RGB uses the luminance channel with 0.1.
// Throws RuntimeFailure on a blank image.
float symmetry_score(const Image& image, Axis axis = Axis::Vertical);

// Class score targets: {1.0, 0.8, 0.6, 0.4, 0.2} for 5 levels, the first and
// fifth ({1.0, 0.2}) for 2.
std::vector<float> level_targets(int levels);

// Generators. `level` indexes into level_targets(levels); every generator
// degrades until the measured score lands within +-0.05 of the target and
// throws RuntimeFailure if 1000 adjustment attempts cannot reach it.
LabeledImage gen_square(int level, int levels, int size, std::mt19937_64& rng);
LabeledImage gen_sierpinski(int depth, int level, int levels, int size, std::mt19937_64& rng);
LabeledImage gen_parted(int level, int levels, int n_splits, int size, std::mt19937_64& rng,
                        bool someparted);
LabeledImage gen_human_like(int level, int levels, int size, std::mt19937_64& rng);
LabeledImage gen_rgb_symmetric(int level, int levels, int size, std::mt19937_64& rng);

// Rotation about center then translation; arguments validated against the
// allowed ranges ([-180, 180] degrees, [-0.2, 0.2] of the side per axis).
Image apply_transform(const Image& image, float rotation_deg, float translation_frac_x,
                      float translation_frac_y);

// Balanced classes, per-image derived seeds, seeded-shuffle 80/20 split.
LabeledDataset build_dataset(const SymmetrySpec& spec);

// The built-in dataset identifiers (SQUARE, TWOCLASSES-SQUARE, ...).
bool is_named_dataset(const std::string& name);
SymmetrySpec spec_for_named_dataset(const std::string& name, int count, int image_size,
                                    uint64_t seed);

} // namespace visnet
