#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "core/errors.hpp"
#include "core/ingest.hpp"
#include "core/symmetry.hpp"
#include "support/synthio.hpp"

using namespace visnet;
namespace fs = std::filesystem;

static fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("visnet_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

static void truncate_file(const fs::path& path, uintmax_t size) {
    fs::resize_file(path, size);
}

TEST_CASE("pgm and ppm round-trip at 8-bit precision") {
    const fs::path dir = temp_dir("pnm");
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> byte(0, 255);

    Image gray(6, 5, 1);
    for (auto& v : gray.data) v = static_cast<float>(byte(rng)) / 255.0f;
    write_pnm((dir / "g.pgm").string(), gray);
    const Image gback = read_pnm((dir / "g.pgm").string());
    REQUIRE(gback.channels == 1);
    REQUIRE(gback.height == 6);
    REQUIRE(gback.width == 5);
    for (size_t i = 0; i < gray.data.size(); ++i) {
        CHECK(gback.data[i] == doctest::Approx(gray.data[i]).epsilon(1e-6));
    }

    Image rgb(4, 7, 3);
    for (auto& v : rgb.data) v = static_cast<float>(byte(rng)) / 255.0f;
    write_pnm((dir / "c.ppm").string(), rgb);
    const Image cback = read_pnm((dir / "c.ppm").string());
    REQUIRE(cback.channels == 3);
    for (size_t i = 0; i < rgb.data.size(); ++i) {
        CHECK(cback.data[i] == doctest::Approx(rgb.data[i]).epsilon(1e-6));
    }
}

TEST_CASE("pnm header comments are skipped") {
    const fs::path dir = temp_dir("pnm_comment");
    std::ofstream out((dir / "c.pgm").string(), std::ios::binary);
    out << "P5\n# a comment\n2 # trailing\n2\n255\n";
    const char px[4] = {0, 64, (char)128, (char)255};
    out.write(px, 4);
    out.close();
    const Image img = read_pnm((dir / "c.pgm").string());
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.at(0, 1, 1) == doctest::Approx(1.0f));
}

TEST_CASE("pnm rejects bad magic, maxval, and truncation") {
    const fs::path dir = temp_dir("pnm_bad");
    {
        std::ofstream out((dir / "bad.pgm").string(), std::ios::binary);
        out << "P4\n2 2\n255\n....";
    }
    CHECK_THROWS_AS(read_pnm((dir / "bad.pgm").string()), FormatError);
    {
        std::ofstream out((dir / "max.pgm").string(), std::ios::binary);
        out << "P5\n2 2\n65535\n....";
    }
    CHECK_THROWS_AS(read_pnm((dir / "max.pgm").string()), FormatError);
    {
        std::ofstream out((dir / "short.pgm").string(), std::ios::binary);
        out << "P5\n4 4\n255\nxx";
    }
    CHECK_THROWS_AS(read_pnm((dir / "short.pgm").string()), FormatError);
    CHECK_THROWS_AS(read_pnm((dir / "missing.pgm").string()), FormatError);
}

TEST_CASE("mnist loader round-trips synthetic idx files") {
    const fs::path dir = temp_dir("idx");
    std::vector<uint8_t> labels = {3, 1, 4, 1, 5, 9};
    const auto images = synthio::render_digits(labels, 77);
    synthio::write_idx_images((dir / "img").string(), images, 28, 28);
    synthio::write_idx_labels((dir / "lbl").string(), labels);

    const LabeledDataset ds = load_mnist((dir / "img").string(), (dir / "lbl").string());
    REQUIRE(ds.size() == 6);
    for (size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.labels[i] == labels[i]);
        REQUIRE(ds.images[i].height == 28);
        REQUIRE(ds.images[i].channels == 1);
        for (int p = 0; p < 28 * 28; ++p) {
            CHECK(ds.images[i].data[static_cast<size_t>(p)] ==
                  doctest::Approx(images[i][static_cast<size_t>(p)] / 255.0f));
        }
    }
}

TEST_CASE("mnist loader validates magic and count consistency") {
    const fs::path dir = temp_dir("idx_bad");
    std::vector<uint8_t> labels = {0, 1};
    const auto images = synthio::render_digits(labels, 1);
    synthio::write_idx_images((dir / "img").string(), images, 28, 28);
    synthio::write_idx_labels((dir / "lbl").string(), labels);

    // Labels file posing as images.
    CHECK_THROWS_AS(load_mnist((dir / "lbl").string(), (dir / "lbl").string()), FormatError);
    // Image/label count mismatch.
    synthio::write_idx_labels((dir / "lbl3").string(), {0, 1, 2});
    CHECK_THROWS_AS(load_mnist((dir / "img").string(), (dir / "lbl3").string()), FormatError);
}

TEST_CASE("fuzzed truncation of idx files always raises a format error") {
    const fs::path dir = temp_dir("idx_fuzz");
    std::vector<uint8_t> labels(10);
    for (size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<uint8_t>(i);
    const auto images = synthio::render_digits(labels, 5);
    synthio::write_idx_images((dir / "img").string(), images, 28, 28);
    synthio::write_idx_labels((dir / "lbl").string(), labels);
    const uintmax_t full = fs::file_size(dir / "img");

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const uintmax_t cut = rng() % full;
        fs::copy_file(dir / "img", dir / "cut", fs::copy_options::overwrite_existing);
        truncate_file(dir / "cut", cut);
        CHECK_THROWS_AS(load_mnist((dir / "cut").string(), (dir / "lbl").string()), FormatError);
    }
    const uintmax_t lfull = fs::file_size(dir / "lbl");
    for (int trial = 0; trial < 10; ++trial) {
        const uintmax_t cut = rng() % lfull;
        fs::copy_file(dir / "lbl", dir / "lcut", fs::copy_options::overwrite_existing);
        truncate_file(dir / "lcut", cut);
        CHECK_THROWS_AS(load_mnist((dir / "img").string(), (dir / "lcut").string()), FormatError);
    }
}

TEST_CASE("cifar loader round-trips synthetic batches") {
    const fs::path dir = temp_dir("cifar");
    std::vector<uint8_t> labels = {2, 7, 0};
    const auto planes = synthio::render_color_discs(labels, 88);
    synthio::write_cifar_batch((dir / "b1.bin").string(), planes, labels);
    synthio::write_cifar_batch((dir / "t.bin").string(), planes, labels);

    const LabeledDataset ds = load_cifar10({(dir / "b1.bin").string()}, {(dir / "t.bin").string()});
    REQUIRE(ds.size() == 6);
    CHECK(ds.indices(Split::Train).size() == 3);
    CHECK(ds.indices(Split::Test).size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(ds.labels[i] == labels[i]);
        REQUIRE(ds.images[i].channels == 3);
        REQUIRE(ds.images[i].height == 32);
        for (int c = 0; c < 3; ++c) {
            for (int p = 0; p < 1024; ++p) {
                CHECK(ds.images[i].plane(c)[p] ==
                      doctest::Approx(planes[i][static_cast<size_t>(c) * 1024 + p] / 255.0f));
            }
        }
    }
}

TEST_CASE("cifar loader rejects bad record lengths and labels") {
    const fs::path dir = temp_dir("cifar_bad");
    std::vector<uint8_t> labels = {1, 2};
    const auto planes = synthio::render_color_discs(labels, 9);
    synthio::write_cifar_batch((dir / "ok.bin").string(), planes, labels);

    std::mt19937_64 rng(43);
    const uintmax_t full = fs::file_size(dir / "ok.bin");
    for (int trial = 0; trial < 20; ++trial) {
        uintmax_t cut = rng() % full;
        if (cut % 3073 == 0) cut += 1; // only off-record sizes are malformed
        fs::copy_file(dir / "ok.bin", dir / "cut.bin", fs::copy_options::overwrite_existing);
        truncate_file(dir / "cut.bin", cut);
        CHECK_THROWS_AS(load_cifar10({(dir / "cut.bin").string()}, {}), FormatError);
    }

    synthio::write_cifar_batch((dir / "lbl.bin").string(), planes, {11, 2});
    CHECK_THROWS_AS(load_cifar10({(dir / "lbl.bin").string()}, {}), FormatError);
    CHECK_THROWS_AS(load_cifar10({(dir / "absent.bin").string()}, {}), FormatError);
}

TEST_CASE("to_grayscale averages the planes") {
    Image rgb(2, 2, 3);
    rgb.at(0, 0, 0) = 0.3f;
    rgb.at(1, 0, 0) = 0.6f;
    rgb.at(2, 0, 0) = 0.9f;
    const Image g = to_grayscale(rgb);
    CHECK(g.channels == 1);
    CHECK(g.at(0, 0, 0) == doctest::Approx(0.6f));
}

TEST_CASE("dataset directory round-trip preserves images, labels, and splits") {
    const fs::path dir = temp_dir("dsdir");
    SymmetrySpec spec;
    spec.family = Family::Square;
    spec.levels = 2;
    spec.count = 20;
    spec.image_size = 16;
    spec.seed = 13;
    const LabeledDataset ds = build_dataset(spec);
    write_dataset(ds, dir.string());
    CHECK(fs::exists(dir / "manifest.csv"));

    const LabeledDataset back = load_dataset_dir(dir.string());
    REQUIRE(back.size() == ds.size());
    for (size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.labels[i] == ds.labels[i]);
        CHECK(back.split[i] == ds.split[i]);
        CHECK(back.measured_symmetry[i] == doctest::Approx(ds.measured_symmetry[i]).epsilon(1e-3));
        REQUIRE(back.images[i].data.size() == ds.images[i].data.size());
        for (size_t p = 0; p < ds.images[i].data.size(); ++p) {
            CHECK(back.images[i].data[p] == doctest::Approx(ds.images[i].data[p]).epsilon(1e-2));
        }
    }
    CHECK_THROWS_AS(load_dataset_dir((dir / "nope").string()), FormatError);
}

TEST_CASE("rgb dataset directory round-trip uses ppm") {
    const fs::path dir = temp_dir("dsdir_rgb");
    SymmetrySpec spec;
    spec.family = Family::RgbImage;
    spec.levels = 2;
    spec.count = 8;
    spec.image_size = 16;
    spec.seed = 17;
    const LabeledDataset ds = build_dataset(spec);
    write_dataset(ds, dir.string());
    const LabeledDataset back = load_dataset_dir(dir.string());
    REQUIRE(back.size() == 8);
    CHECK(back.images[0].channels == 3);
}

TEST_CASE("stratified subset draws balanced seeded samples") {
    const fs::path dir = temp_dir("strat");
    std::vector<uint8_t> labels(200);
    std::mt19937_64 rng(19);
    for (auto& l : labels) l = static_cast<uint8_t>(rng() % 10);
    const auto images = synthio::render_digits(labels, 3);
    synthio::write_idx_images((dir / "img").string(), images, 28, 28);
    synthio::write_idx_labels((dir / "lbl").string(), labels);
    LabeledDataset ds = load_mnist((dir / "img").string(), (dir / "lbl").string());
    // Tag a test split by hand: second half test.
    for (size_t i = 100; i < 200; ++i) ds.split[i] = Split::Test;

    const LabeledDataset sub = stratified_subset(ds, 5, 2, 77);
    std::vector<int> train_per(10, 0), test_per(10, 0);
    for (size_t i = 0; i < sub.size(); ++i) {
        (sub.split[i] == Split::Train ? train_per : test_per)[static_cast<size_t>(sub.labels[i])]++;
    }
    for (int c = 0; c < 10; ++c) {
        CHECK(train_per[static_cast<size_t>(c)] <= 5);
        CHECK(test_per[static_cast<size_t>(c)] <= 2);
    }
    const LabeledDataset sub2 = stratified_subset(ds, 5, 2, 77);
    REQUIRE(sub2.size() == sub.size());
    for (size_t i = 0; i < sub.size(); ++i) CHECK(sub.labels[i] == sub2.labels[i]);
}
