#include "core/ingest.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "core/errors.hpp"

namespace fs = std::filesystem;

namespace visnet {

// ---------------------------------------------------------------------------
// PNM

// Reads the next header token, skipping whitespace and '#' comment lines.
static std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

Image read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("pnm: cannot open " + path);
    const std::string magic = pnm_token(in);
    int channels;
    if (magic == "P5") {
        channels = 1;
    } else if (magic == "P6") {
        channels = 3;
    } else {
        throw FormatError("pnm: unsupported magic '" + magic + "' in " + path);
    }
    int w, h, maxval;
    try {
        w = std::stoi(pnm_token(in));
        h = std::stoi(pnm_token(in));
        maxval = std::stoi(pnm_token(in));
    } catch (const std::exception&) {
        throw FormatError("pnm: malformed header in " + path);
    }
    if (w < 1 || h < 1) throw FormatError("pnm: invalid dimensions in " + path);
    if (maxval != 255) throw FormatError("pnm: unsupported maxval (expected 255) in " + path);
    std::vector<uint8_t> raw(static_cast<size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size()) {
        throw FormatError("pnm: truncated pixel data in " + path);
    }
    Image img(h, w, channels);
    // File data is pixel-interleaved; our layout is planar.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                img.at(c, y, x) =
                    raw[(static_cast<size_t>(y) * w + x) * channels + c] / 255.0f;
            }
        }
    }
    return img;
}

void write_pnm(const std::string& path, const Image& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw ParamError("pnm: only 1-plane (P5) or 3-plane (P6) images are supported");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeFailure("pnm: cannot write " + path);
    out << (image.channels == 1 ? "P5" : "P6") << "\n"
        << image.width << " " << image.height << "\n255\n";
    std::vector<uint8_t> raw(static_cast<size_t>(image.width) * image.height * image.channels);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                const float v = std::clamp(image.at(c, y, x), 0.0f, 1.0f);
                raw[(static_cast<size_t>(y) * image.width + x) * image.channels + c] =
                    static_cast<uint8_t>(std::lround(v * 255.0f));
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw RuntimeFailure("pnm: write failed for " + path);
}

// ---------------------------------------------------------------------------
// MNIST (IDX)

static uint32_t read_be32(std::istream& in, const std::string& path, size_t offset) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) {
        throw FormatError("idx: truncated header at byte " + std::to_string(offset) + " in " + path);
    }
    return (static_cast<uint32_t>(b[0]) << 24) | (static_cast<uint32_t>(b[1]) << 16) |
           (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

LabeledDataset load_mnist(const std::string& images_path, const std::string& labels_path) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw FormatError("idx: cannot open " + images_path);
    std::ifstream labs(labels_path, std::ios::binary);
    if (!labs) throw FormatError("idx: cannot open " + labels_path);

    const uint32_t img_magic = read_be32(imgs, images_path, 0);
    if (img_magic != 2051) {
        throw FormatError("idx: bad image magic " + std::to_string(img_magic) + " at byte 0 in " +
                          images_path + " (expected 2051)");
    }
    const uint32_t count = read_be32(imgs, images_path, 4);
    const uint32_t rows = read_be32(imgs, images_path, 8);
    const uint32_t cols = read_be32(imgs, images_path, 12);
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) {
        throw FormatError("idx: implausible dimensions at byte 8 in " + images_path);
    }
    const uint32_t lab_magic = read_be32(labs, labels_path, 0);
    if (lab_magic != 2049) {
        throw FormatError("idx: bad label magic " + std::to_string(lab_magic) + " at byte 0 in " +
                          labels_path + " (expected 2049)");
    }
    const uint32_t lab_count = read_be32(labs, labels_path, 4);
    if (lab_count != count) {
        throw FormatError("idx: image/label count mismatch (" + std::to_string(count) + " vs " +
                          std::to_string(lab_count) + ") at byte 4");
    }

    LabeledDataset ds;
    ds.images.reserve(count);
    ds.labels.reserve(count);
    std::vector<uint8_t> buf(static_cast<size_t>(rows) * cols);
    for (uint32_t i = 0; i < count; ++i) {
        imgs.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<size_t>(imgs.gcount()) != buf.size()) {
            throw FormatError("idx: truncated image data at byte " +
                              std::to_string(16 + static_cast<size_t>(i) * buf.size()) + " in " +
                              images_path);
        }
        Image img(static_cast<int>(rows), static_cast<int>(cols), 1);
        for (size_t p = 0; p < buf.size(); ++p) img.data[p] = buf[p] / 255.0f;
        ds.images.push_back(std::move(img));
        int lab = labs.get();
        if (lab == EOF) {
            throw FormatError("idx: truncated label data at byte " + std::to_string(8 + i) +
                              " in " + labels_path);
        }
        ds.labels.push_back(lab);
    }
    ds.split.assign(count, Split::Train);
    return ds;
}

LabeledDataset load_mnist_split(const std::string& train_images, const std::string& train_labels,
                                const std::string& test_images, const std::string& test_labels) {
    LabeledDataset train = load_mnist(train_images, train_labels);
    LabeledDataset test = load_mnist(test_images, test_labels);
    for (size_t i = 0; i < test.size(); ++i) {
        train.images.push_back(std::move(test.images[i]));
        train.labels.push_back(test.labels[i]);
        train.split.push_back(Split::Test);
    }
    return train;
}

// ---------------------------------------------------------------------------
// CIFAR-10

static constexpr size_t kCifarRecord = 3073; // 1 label byte + 3 x 1024 pixel bytes

static void load_cifar_file(const std::string& path, Split split, LabeledDataset& ds) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cifar: cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto len = static_cast<size_t>(in.tellg());
    in.seekg(0);
    if (len == 0 || len % kCifarRecord != 0) {
        throw FormatError("cifar: file length " + std::to_string(len) +
                          " is not a multiple of the 3073-byte record in " + path);
    }
    std::vector<uint8_t> rec(kCifarRecord);
    const size_t n = len / kCifarRecord;
    for (size_t i = 0; i < n; ++i) {
        in.read(reinterpret_cast<char*>(rec.data()), kCifarRecord);
        if (static_cast<size_t>(in.gcount()) != kCifarRecord) {
            throw FormatError("cifar: truncated record at byte " + std::to_string(i * kCifarRecord) +
                              " in " + path);
        }
        if (rec[0] > 9) {
            throw FormatError("cifar: label byte " + std::to_string(rec[0]) + " out of range at record " +
                              std::to_string(i) + " in " + path);
        }
        Image img(32, 32, 3);
        for (int c = 0; c < 3; ++c) {
            for (int p = 0; p < 1024; ++p) {
                img.plane(c)[p] = rec[1 + static_cast<size_t>(c) * 1024 + p] / 255.0f;
            }
        }
        ds.images.push_back(std::move(img));
        ds.labels.push_back(rec[0]);
        ds.split.push_back(split);
    }
}

LabeledDataset load_cifar10(const std::vector<std::string>& train_paths,
                            const std::vector<std::string>& test_paths) {
    LabeledDataset ds;
    ds.class_names = {"airplane", "automobile", "bird",  "cat",  "deer",
                      "dog",      "frog",       "horse", "ship", "truck"};
    for (const auto& p : train_paths) load_cifar_file(p, Split::Train, ds);
    for (const auto& p : test_paths) load_cifar_file(p, Split::Test, ds);
    return ds;
}

Image to_grayscale(const Image& rgb) {
    if (rgb.channels != 3) throw ParamError("to_grayscale: expected 3 planes");
    Image gray(rgb.height, rgb.width, 1);
    const float* r = rgb.plane(0);
    const float* g = rgb.plane(1);
    const float* b = rgb.plane(2);
    for (size_t i = 0; i < gray.data.size(); ++i) gray.data[i] = (r[i] + g[i] + b[i]) / 3.0f;
    return gray;
}

// ---------------------------------------------------------------------------
// Dataset directories

void write_dataset(const LabeledDataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream manifest(fs::path(dir) / "manifest.csv");
    if (!manifest) throw RuntimeFailure("dataset: cannot write manifest in " + dir);
    manifest << "filename,label,split,measured_symmetry\n";
    for (size_t i = 0; i < ds.size(); ++i) {
        std::string name = i < ds.filenames.size() && !ds.filenames[i].empty()
                               ? ds.filenames[i]
                               : ("img_" + std::to_string(i) + (ds.images[i].channels == 3 ? ".ppm" : ".pgm"));
        write_pnm((fs::path(dir) / name).string(), ds.images[i]);
        char sym[32];
        std::snprintf(sym, sizeof(sym), "%.4f",
                      i < ds.measured_symmetry.size() ? ds.measured_symmetry[i] : 0.0f);
        manifest << name << "," << ds.labels[i] << ","
                 << (ds.split[i] == Split::Train ? "train" : "test") << "," << sym << "\n";
    }
}

LabeledDataset load_dataset_dir(const std::string& dir) {
    std::ifstream manifest(fs::path(dir) / "manifest.csv");
    if (!manifest) throw FormatError("dataset: missing manifest.csv in " + dir);
    std::string line;
    if (!std::getline(manifest, line) || line.rfind("filename,label,split", 0) != 0) {
        throw FormatError("dataset: bad manifest header in " + dir);
    }
    LabeledDataset ds;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string name, label, split, sym;
        if (!std::getline(row, name, ',') || !std::getline(row, label, ',') ||
            !std::getline(row, split, ',')) {
            throw FormatError("dataset: malformed manifest row '" + line + "'");
        }
        std::getline(row, sym, ',');
        ds.images.push_back(read_pnm((fs::path(dir) / name).string()));
        try {
            ds.labels.push_back(std::stoi(label));
        } catch (const std::exception&) {
            throw FormatError("dataset: bad label '" + label + "' in manifest");
        }
        if (split != "train" && split != "test") {
            throw FormatError("dataset: bad split '" + split + "' in manifest");
        }
        ds.split.push_back(split == "train" ? Split::Train : Split::Test);
        ds.measured_symmetry.push_back(sym.empty() ? 0.0f : std::stof(sym));
        ds.filenames.push_back(name);
    }
    if (ds.images.empty()) throw FormatError("dataset: empty manifest in " + dir);
    return ds;
}

LabeledDataset stratified_subset(const LabeledDataset& ds, int per_class_train, int per_class_test,
                                 uint64_t seed) {
    const int classes = ds.num_classes();
    std::vector<std::vector<size_t>> train_pool(classes), test_pool(classes);
    for (size_t i = 0; i < ds.size(); ++i) {
        auto& pool = ds.split[i] == Split::Train ? train_pool : test_pool;
        pool[static_cast<size_t>(ds.labels[i])].push_back(i);
    }
    std::mt19937_64 rng(seed);
    LabeledDataset out;
    out.class_names = ds.class_names;
    auto take = [&](std::vector<size_t>& pool, int n, Split s) {
        std::shuffle(pool.begin(), pool.end(), rng);
        n = std::min(n, static_cast<int>(pool.size())); // short pools yield all they have
        for (int i = 0; i < n; ++i) {
            out.images.push_back(ds.images[pool[static_cast<size_t>(i)]]);
            out.labels.push_back(ds.labels[pool[static_cast<size_t>(i)]]);
            out.split.push_back(s);
        }
    };
    for (int c = 0; c < classes; ++c) take(train_pool[static_cast<size_t>(c)], per_class_train, Split::Train);
    for (int c = 0; c < classes; ++c) take(test_pool[static_cast<size_t>(c)], per_class_test, Split::Test);
    return out;
}

} // namespace visnet
