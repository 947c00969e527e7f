#include "core/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "core/errors.hpp"

namespace visnet {

Family family_from_name(const std::string& name) {
    if (name == "square") return Family::Square;
    if (name == "triangle") return Family::Triangle;
    if (name == "parted-square") return Family::Parted;
    if (name == "someparted-square") return Family::SomepartedSquare;
    if (name == "human-like") return Family::HumanLike;
    if (name == "rgb-image") return Family::RgbImage;
    throw ParamError("family: unknown value '" + name + "'");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Square: return "square";
        case Family::Triangle: return "triangle";
        case Family::Parted: return "parted-square";
        case Family::SomepartedSquare: return "someparted-square";
        case Family::HumanLike: return "human-like";
        case Family::RgbImage: return "rgb-image";
    }
    return "?";
}

static std::vector<float> luminance_plane(const Image& img) {
    std::vector<float> lum(static_cast<size_t>(img.height) * img.width);
    const float* r = img.plane(0);
    const float* g = img.plane(1);
    const float* b = img.plane(2);
    for (size_t i = 0; i < lum.size(); ++i) lum[i] = (r[i] + g[i] + b[i]) / 3.0f;
    return lum;
}

float symmetry_score(const Image& image, Axis axis) {
    if (image.empty()) throw ParamError("symmetry_score: empty image");
    std::vector<float> plane;
    float thresh;
    if (image.channels == 3) {
        plane = luminance_plane(image);
        thresh = 0.1f;
    } else {
        plane.assign(image.plane(0), image.plane(0) + static_cast<size_t>(image.height) * image.width);
        thresh = 0.5f;
    }
    const int h = image.height;
    const int w = image.width;
    size_t unionc = 0;
    size_t mismatch = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float v = plane[static_cast<size_t>(y) * w + x];
            const float m = axis == Axis::Vertical ? plane[static_cast<size_t>(y) * w + (w - 1 - x)]
                                                   : plane[static_cast<size_t>(h - 1 - y) * w + x];
            if (v > thresh || m > thresh) {
                ++unionc;
                if (std::fabs(v - m) > thresh) ++mismatch;
            }
        }
    }
    if (unionc == 0) throw RuntimeFailure("symmetry_score: blank image, score undefined");
    return 1.0f - static_cast<float>(mismatch) / static_cast<float>(unionc);
}

std::vector<float> level_targets(int levels) {
    if (levels == 5) return {1.0f, 0.8f, 0.6f, 0.4f, 0.2f};
    if (levels == 2) return {1.0f, 0.2f};
    throw ParamError("levels: must be 2 or 5");
}

static constexpr float kBand = 0.045f; // generator stops inside +-0.045 < the +-0.05 contract
static constexpr int kMaxAttempts = 1000;

// Remove (or restore) small blocks of object pixels on the right half until
// the score lands inside the target band. The pristine copy is the undo
// source; only pixels present in it are ever touched.
static float degrade_by_removal(Image& img, const Image& pristine, float target,
                                std::mt19937_64& rng, int block) {
    const int w = img.width;
    const int h = img.height;
    std::vector<std::pair<int, int>> anchors;
    for (int y = 0; y < h; y += block) {
        for (int x = (w + 1) / 2; x < w; x += block) {
            bool has_object = false;
            for (int dy = 0; dy < block && y + dy < h && !has_object; ++dy) {
                for (int dx = 0; dx < block && x + dx < w; ++dx) {
                    if (pristine.at(0, y + dy, x + dx) > 0.5f) {
                        has_object = true;
                        break;
                    }
                }
            }
            if (has_object) anchors.emplace_back(y, x);
        }
    }
    std::shuffle(anchors.begin(), anchors.end(), rng);
    auto set_block = [&](size_t k, bool object) {
        const auto [y, x] = anchors[k];
        for (int dy = 0; dy < block && y + dy < h; ++dy) {
            for (int dx = 0; dx < block && x + dx < w; ++dx) {
                img.at(0, y + dy, x + dx) = object ? pristine.at(0, y + dy, x + dx) : 0.0f;
            }
        }
    };
    size_t removed = 0;
    float score = symmetry_score(img);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        if (std::fabs(score - target) <= kBand) return score;
        if (score > target) {
            if (removed >= anchors.size()) break;
            set_block(removed++, false);
        } else {
            if (removed == 0) break;
            set_block(--removed, true);
        }
        score = symmetry_score(img);
    }
    throw RuntimeFailure("symmetry generator: could not reach target score " +
                         std::to_string(target));
}

static Image pristine_square(int size) {
    Image img(size, size, 1);
    const int side = (size * 5 / 8) & ~1; // even side keeps the mirror exact
    const int c0 = (size - side) / 2;
    for (int y = c0; y < c0 + side; ++y) {
        for (int x = c0; x < c0 + side; ++x) img.at(0, y, x) = 1.0f;
    }
    return img;
}

LabeledImage gen_square(int level, int levels, int size, std::mt19937_64& rng) {
    const std::vector<float> targets = level_targets(levels);
    if (level < 0 || level >= levels) throw ParamError("level: out of range");
    Image pristine = pristine_square(size);
    Image img = pristine;
    const float score = degrade_by_removal(img, pristine, targets[level], rng, 2);
    return {std::move(img), level, score};
}

// Barycentric sign test, edges inclusive.
static bool in_triangle(float px, float py, float ax, float ay, float bx, float by, float cx,
                        float cy) {
    const float d1 = (px - bx) * (ay - by) - (ax - bx) * (py - by);
    const float d2 = (px - cx) * (by - cy) - (bx - cx) * (py - cy);
    const float d3 = (px - ax) * (cy - ay) - (cx - ax) * (py - ay);
    const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

static bool in_sierpinski(float px, float py, int depth, float ax, float ay, float bx, float by,
                          float cx, float cy) {
    if (!in_triangle(px, py, ax, ay, bx, by, cx, cy)) return false;
    if (depth == 0) return true;
    const float mabx = (ax + bx) / 2, maby = (ay + by) / 2;
    const float mbcx = (bx + cx) / 2, mbcy = (by + cy) / 2;
    const float mcax = (cx + ax) / 2, mcay = (cy + ay) / 2;
    if (in_triangle(px, py, ax, ay, mabx, maby, mcax, mcay))
        return in_sierpinski(px, py, depth - 1, ax, ay, mabx, maby, mcax, mcay);
    if (in_triangle(px, py, mabx, maby, bx, by, mbcx, mbcy))
        return in_sierpinski(px, py, depth - 1, mabx, maby, bx, by, mbcx, mbcy);
    if (in_triangle(px, py, mcax, mcay, mbcx, mbcy, cx, cy))
        return in_sierpinski(px, py, depth - 1, mcax, mcay, mbcx, mbcy, cx, cy);
    return false; // central hole
}

static Image pristine_sierpinski(int depth, int size) {
    Image img(size, size, 1);
    // Apex up, base slightly above the bottom so the depth-1 hole straddles
    // the image center.
    const float ax = 0.5f * size, ay = 0.02f * size;
    const float bx = 0.04f * size, by = 0.92f * size;
    const float cx = 0.96f * size, cy = 0.92f * size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            if (in_sierpinski(x + 0.5f, y + 0.5f, depth, ax, ay, bx, by, cx, cy)) {
                img.at(0, y, x) = 1.0f;
            }
        }
    }
    return img;
}

LabeledImage gen_sierpinski(int depth, int level, int levels, int size, std::mt19937_64& rng) {
    if (depth < 0) throw ParamError("sierpinski depth: must be >= 0");
    const std::vector<float> targets = level_targets(levels);
    if (level < 0 || level >= levels) throw ParamError("level: out of range");
    Image pristine = pristine_sierpinski(depth, size);
    Image img = pristine;
    const float score = degrade_by_removal(img, pristine, targets[level], rng, 1);
    return {std::move(img), level, score};
}

// Split widths for the parted square, symmetric about the center so that the
// undisplaced figure mirrors exactly.
static std::vector<int> symmetric_widths(int total, int segments) {
    std::vector<int> w(segments, total / segments);
    int rem = total % segments;
    if (rem % 2 == 1) {
        // Odd remainder goes to the middle segment (segments is odd here
        // whenever total is even, which the caller guarantees).
        w[segments / 2] += 1;
        rem -= 1;
    }
    for (int i = 0; rem > 0 && i < segments / 2; ++i, rem -= 2) {
        w[i] += 1;
        w[segments - 1 - i] += 1;
    }
    return w;
}

struct PartedLayout {
    int size = 0;
    int side = 0;
    int r0 = 0, c0 = 0;
    std::vector<int> widths;
    std::vector<int> starts;  // column start per segment, relative to c0
    std::vector<int> offsets; // vertical displacement per segment
};

static Image render_parted(const PartedLayout& l) {
    Image img(l.size, l.size, 1);
    for (size_t s = 0; s < l.widths.size(); ++s) {
        for (int y = 0; y < l.side; ++y) {
            const int yy = l.r0 + y + l.offsets[s];
            if (yy < 0 || yy >= l.size) continue;
            for (int x = 0; x < l.widths[s]; ++x) {
                img.at(0, yy, l.c0 + l.starts[s] + x) = 1.0f;
            }
        }
    }
    return img;
}

LabeledImage gen_parted(int level, int levels, int n_splits, int size, std::mt19937_64& rng,
                        bool someparted) {
    const std::vector<float> targets = level_targets(levels);
    if (level < 0 || level >= levels) throw ParamError("level: out of range");
    if (n_splits < 1) throw ParamError("n_splits: must be >= 1");
    if (someparted) {
        std::uniform_int_distribution<int> pick(1 + level, 2 + level);
        n_splits = pick(rng);
    }
    PartedLayout l;
    l.size = size;
    l.side = (size * 5 / 8) & ~1;
    l.r0 = l.c0 = (size - l.side) / 2;
    const int segments = n_splits + 1;
    if (segments > l.side) throw ParamError("n_splits: too many segments for the square side");
    l.widths = symmetric_widths(l.side, segments);
    l.starts.resize(segments);
    for (int s = 1; s < segments; ++s) l.starts[s] = l.starts[s - 1] + l.widths[s - 1];
    // Mirror-paired vertical offsets: symmetric by construction.
    l.offsets.assign(segments, 0);
    std::uniform_int_distribution<int> base(-2, 2);
    for (int s = 0; s <= (segments - 1) / 2; ++s) {
        const int v = base(rng);
        l.offsets[s] = v;
        l.offsets[segments - 1 - s] = v;
    }
    Image img = render_parted(l);
    float score = symmetry_score(img);
    const float target = targets[level];
    const int max_off = l.side / 2 + 4;
    std::uniform_int_distribution<int> pick_seg(0, segments - 1);
    std::uniform_int_distribution<int> pick_dir(0, 1);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        if (std::fabs(score - target) <= kBand) {
            return {std::move(img), level, score};
        }
        const int s = pick_seg(rng);
        const int delta = pick_dir(rng) ? 1 : -1;
        if (std::abs(l.offsets[s] + delta) > max_off) continue;
        l.offsets[s] += delta;
        Image trial = render_parted(l);
        const float trial_score = symmetry_score(trial);
        if (std::fabs(trial_score - target) < std::fabs(score - target)) {
            img = std::move(trial);
            score = trial_score;
        } else {
            l.offsets[s] -= delta;
        }
    }
    throw RuntimeFailure("gen_parted: could not reach target score " + std::to_string(target));
}

// Human-like figure: head circle, torso, arms, legs. The left side is drawn
// and mirrored, so the undisplaced figure is exactly symmetric; the right arm
// and leg are then re-drawn at a level-dependent displacement.
namespace {
struct Rect {
    float y0, y1, x0, x1; // continuous, relative to a 32-unit canvas
};
} // namespace

static void fill_rect(Image& img, const Rect& r, float scale, int dx = 0, int dy = 0) {
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const float py = (y + 0.5f) / scale - dy / scale;
            const float px = (x + 0.5f) / scale - dx / scale;
            if (py >= r.y0 && py < r.y1 && px >= r.x0 && px < r.x1) img.at(0, y, x) = 1.0f;
        }
    }
}

static void fill_circle(Image& img, float cy, float cx, float rad, float scale) {
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const float py = (y + 0.5f) / scale;
            const float px = (x + 0.5f) / scale;
            if ((py - cy) * (py - cy) + (px - cx) * (px - cx) <= rad * rad) img.at(0, y, x) = 1.0f;
        }
    }
}

static Image render_human(int size, int arm_dx, int arm_dy, int leg_dx, int leg_dy) {
    Image img(size, size, 1);
    const float scale = static_cast<float>(size) / 32.0f;
    fill_circle(img, 6.0f, 16.0f, 3.2f, scale);
    fill_rect(img, {9.0f, 20.0f, 13.0f, 19.0f}, scale);           // torso
    fill_rect(img, {10.0f, 14.0f, 8.0f, 13.0f}, scale);           // left arm
    fill_rect(img, {20.0f, 28.0f, 13.0f, 15.0f}, scale);          // left leg
    fill_rect(img, {10.0f, 14.0f, 19.0f, 24.0f}, scale, arm_dx, arm_dy);  // right arm
    fill_rect(img, {20.0f, 28.0f, 17.0f, 19.0f}, scale, leg_dx, leg_dy);  // right leg
    return img;
}

LabeledImage gen_human_like(int level, int levels, int size, std::mt19937_64& rng) {
    const std::vector<float> targets = level_targets(levels);
    if (level < 0 || level >= levels) throw ParamError("level: out of range");
    const float target = targets[level];
    // Structured displacement scaled with the degradation level, then a
    // removal walk to land exactly in the band.
    std::uniform_int_distribution<int> sign(0, 1);
    const int sa = sign(rng), sb = sign(rng), sc = sign(rng), sd = sign(rng);
    // Removal can only lower the score, so back the displacement off until
    // the starting point sits at or above the band.
    for (int mag = level;; --mag) {
        const int arm_dx = sa ? mag : -mag;
        const int arm_dy = sb ? mag : 0;
        const int leg_dx = sc ? mag : -mag;
        const int leg_dy = sd ? 0 : mag;
        Image img = render_human(size, arm_dx, arm_dy, leg_dx, leg_dy);
        if (symmetry_score(img) < target - kBand && mag > 0) continue;
        Image pristine = img;
        const float score = degrade_by_removal(img, pristine, target, rng, 1);
        return {std::move(img), level, score};
    }
}

LabeledImage gen_rgb_symmetric(int level, int levels, int size, std::mt19937_64& rng) {
    LabeledImage shape = gen_square(level, levels, size, rng);
    std::uniform_real_distribution<float> bright(0.55f, 1.0f);
    std::uniform_real_distribution<float> dark(0.0f, 0.07f);
    std::uniform_real_distribution<float> noise(-0.015f, 0.015f);
    const float obj[3] = {bright(rng), bright(rng), bright(rng)};
    const float bg[3] = {dark(rng), dark(rng), dark(rng)};
    Image rgb(size, size, 3);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const bool object = shape.pixels.at(0, y, x) > 0.5f;
            const float n = noise(rng);
            for (int c = 0; c < 3; ++c) {
                const float v = object ? obj[c] : std::clamp(bg[c] + n, 0.0f, 0.09f);
                rgb.at(c, y, x) = v;
            }
        }
    }
    return {std::move(rgb), level, shape.measured_symmetry};
}

Image apply_transform(const Image& image, float rotation_deg, float translation_frac_x,
                      float translation_frac_y) {
    if (std::fabs(rotation_deg) > 180.0f) throw ParamError("rotation: must be within [-180, 180]");
    if (std::fabs(translation_frac_x) > 0.2f || std::fabs(translation_frac_y) > 0.2f) {
        throw ParamError("translation: must be within [-0.2, 0.2] of the image side");
    }
    return rotate_translate(image, rotation_deg, translation_frac_x, translation_frac_y);
}

static uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

static LabeledImage generate_one(const SymmetrySpec& spec, int level, std::mt19937_64& rng) {
    switch (spec.family) {
        case Family::Square:
            return gen_square(level, spec.levels, spec.image_size, rng);
        case Family::Triangle:
            return gen_sierpinski(spec.sierpinski_depth, level, spec.levels, spec.image_size, rng);
        case Family::Parted:
            return gen_parted(level, spec.levels, spec.n_splits, spec.image_size, rng, false);
        case Family::SomepartedSquare:
            return gen_parted(level, spec.levels, spec.n_splits, spec.image_size, rng, true);
        case Family::HumanLike:
            return gen_human_like(level, spec.levels, spec.image_size, rng);
        case Family::RgbImage:
            return gen_rgb_symmetric(level, spec.levels, spec.image_size, rng);
    }
    throw ParamError("family: invalid enum value");
}

LabeledDataset build_dataset(const SymmetrySpec& spec) {
    if (spec.levels != 2 && spec.levels != 5) throw ParamError("levels: must be 2 or 5");
    if (spec.count < 1) throw ParamError("count: must be >= 1");
    if (spec.image_size < 16) throw ParamError("image_size: must be >= 16");
    if (spec.rotation_range < 0.0f || spec.rotation_range > 180.0f) {
        throw ParamError("rotation_range: must be within [0, 180]");
    }
    if (spec.translation_range < 0.0f || spec.translation_range > 0.2f) {
        throw ParamError("translation_range: must be within [0, 0.2]");
    }
    // Balanced labels; remainder round-robin over the first classes.
    std::vector<int> labels;
    labels.reserve(spec.count);
    const int base = spec.count / spec.levels;
    const int rem = spec.count % spec.levels;
    for (int l = 0; l < spec.levels; ++l) {
        const int n = base + (l < rem ? 1 : 0);
        labels.insert(labels.end(), n, l);
    }
    LabeledDataset ds;
    const std::vector<float> targets = level_targets(spec.levels);
    ds.class_names.reserve(spec.levels);
    for (float t : targets) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "sym%03d", static_cast<int>(std::lround(t * 100)));
        ds.class_names.emplace_back(buf);
    }
    ds.images.reserve(spec.count);
    const bool rgb = spec.family == Family::RgbImage;
    for (int i = 0; i < spec.count; ++i) {
        std::mt19937_64 rng(splitmix64(spec.seed + static_cast<uint64_t>(i)));
        LabeledImage li = generate_one(spec, labels[static_cast<size_t>(i)], rng);
        if (spec.rotation_range > 0.0f || spec.translation_range > 0.0f) {
            std::uniform_real_distribution<float> rot(-spec.rotation_range, spec.rotation_range);
            std::uniform_real_distribution<float> tr(-spec.translation_range,
                                                     spec.translation_range);
            const float r = rot(rng);
            const float tx = tr(rng);
            const float ty = tr(rng);
            li.pixels = apply_transform(li.pixels, r, tx, ty);
        }
        char name[32];
        std::snprintf(name, sizeof(name), "img_%05d.%s", i, rgb ? "ppm" : "pgm");
        ds.images.push_back(std::move(li.pixels));
        ds.labels.push_back(li.label);
        ds.measured_symmetry.push_back(li.measured_symmetry);
        ds.filenames.emplace_back(name);
    }
    // Seeded-shuffle 80/20 split.
    std::vector<size_t> order(ds.images.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 split_rng(splitmix64(spec.seed ^ 0x5b5e1a6cull));
    std::shuffle(order.begin(), order.end(), split_rng);
    const size_t train_count = order.size() * 8 / 10;
    ds.split.assign(order.size(), Split::Test);
    for (size_t i = 0; i < train_count; ++i) ds.split[order[i]] = Split::Train;
    return ds;
}

bool is_named_dataset(const std::string& name) {
    static const char* names[] = {
        "SQUARE",
        "TWOCLASSES-SQUARE",
        "TRIANGLE",
        "ROTATED-TRANSLATED-TRIANGLE",
        "FIVECLASSES-PARTED-SQUARE",
        "TWOCLASSES-PARTED-SQUARE",
        "FIVECLASSES-SOMEPARTED-SQUARE",
        "TWOCLASSES-SOMEPARTED-SQUARE",
        "ROTATED-TRANSLATED-HUMAN-LIKE",
        "RGB-IMAGE",
    };
    return std::find(std::begin(names), std::end(names), name) != std::end(names);
}

SymmetrySpec spec_for_named_dataset(const std::string& name, int count, int image_size,
                                    uint64_t seed) {
    SymmetrySpec s;
    s.count = count;
    s.image_size = image_size;
    s.seed = seed;
    s.levels = name.rfind("TWOCLASSES-", 0) == 0 ? 2 : 5;
    if (name == "SQUARE" || name == "TWOCLASSES-SQUARE") {
        s.family = Family::Square;
    } else if (name == "TRIANGLE") {
        s.family = Family::Triangle;
    } else if (name == "ROTATED-TRANSLATED-TRIANGLE") {
        s.family = Family::Triangle;
        s.rotation_range = 180.0f;
        s.translation_range = 0.2f;
    } else if (name == "FIVECLASSES-PARTED-SQUARE" || name == "TWOCLASSES-PARTED-SQUARE") {
        s.family = Family::Parted;
    } else if (name == "FIVECLASSES-SOMEPARTED-SQUARE" ||
               name == "TWOCLASSES-SOMEPARTED-SQUARE") {
        s.family = Family::SomepartedSquare;
    } else if (name == "ROTATED-TRANSLATED-HUMAN-LIKE") {
        s.family = Family::HumanLike;
        s.rotation_range = 180.0f;
        s.translation_range = 0.2f;
    } else if (name == "RGB-IMAGE") {
        s.family = Family::RgbImage;
    } else {
        throw ParamError("dataset: unknown named dataset '" + name + "'");
    }
    return s;
}

} // namespace visnet
