#include "core/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/ingest.hpp"
#include "core/model_io.hpp"
#include "core/symmetry.hpp"

namespace fs = std::filesystem;

namespace visnet {

Frontend make_frontend(const RunConfig& cfg, Variant variant) {
    GaborParams gp;
    gp.frequencies = cfg.get_float_list("gabor.frequencies");
    gp.orientations = cfg.get_float_list("gabor.orientations");
    gp.phases = cfg.get_float_list("gabor.phases");
    gp.sigma = cfg.get_float("gabor.sigma");
    gp.gamma = cfg.get_float("gabor.gamma");
    gp.kernel_size = cfg.get_int("gabor.kernel_size");
    DogParams dp;
    dp.sigma1 = cfg.get_float("dog.sigma1");
    dp.sigma2 = cfg.get_float("dog.sigma2");
    dp.k = cfg.get_float("dog.k");
    dp.kernel_size = cfg.get_int("dog.kernel_size");
    const StackProvenance prov = variant == Variant::LiDogRgb ? StackProvenance::DogRgbGabor
                                                              : StackProvenance::GrayGabor;
    return Frontend(prov, gp, dp, cfg.get_int("grid"));
}

static bool is_benchmark(const std::string& name) { return name == "mnist" || name == "cifar10"; }

LabeledDataset resolve_dataset(const RunConfig& cfg, uint64_t seed_offset) {
    const std::string& name = cfg.get("dataset.name");
    const std::string& path = cfg.get("dataset.path");
    if (name == "dir") {
        if (path.empty()) throw ParamError("dataset.path: required for dataset.name=dir");
        return load_dataset_dir(path);
    }
    if (name == "mnist") {
        if (path.empty()) throw ParamError("dataset.path: required for dataset.name=mnist");
        LabeledDataset ds = load_mnist_split(
            (fs::path(path) / "train-images-idx3-ubyte").string(),
            (fs::path(path) / "train-labels-idx1-ubyte").string(),
            (fs::path(path) / "t10k-images-idx3-ubyte").string(),
            (fs::path(path) / "t10k-labels-idx1-ubyte").string());
        const int pct = cfg.get_int("dataset.per_class_train");
        const int pce = cfg.get_int("dataset.per_class_test");
        if (pct > 0 || pce > 0) {
            ds = stratified_subset(ds, pct, pce, cfg.get_u64("dataset.seed") + seed_offset);
        }
        return ds;
    }
    if (name == "cifar10") {
        if (path.empty()) throw ParamError("dataset.path: required for dataset.name=cifar10");
        std::vector<std::string> train;
        for (int b = 1; b <= 5; ++b) {
            train.push_back((fs::path(path) / ("data_batch_" + std::to_string(b) + ".bin")).string());
        }
        LabeledDataset ds = load_cifar10(train, {(fs::path(path) / "test_batch.bin").string()});
        const int pct = cfg.get_int("dataset.per_class_train");
        const int pce = cfg.get_int("dataset.per_class_test");
        if (pct > 0 || pce > 0) {
            ds = stratified_subset(ds, pct, pce, cfg.get_u64("dataset.seed") + seed_offset);
        }
        return ds;
    }
    if (!is_named_dataset(name)) {
        throw ParamError("dataset.name: expected a named dataset identifier, mnist, cifar10, or dir"
                         " (got '" + name + "')");
    }
    SymmetrySpec spec = spec_for_named_dataset(name, cfg.get_int("dataset.count"),
                                               cfg.get_int("dataset.image_size"),
                                               cfg.get_u64("dataset.seed") + seed_offset);
    spec.n_splits = cfg.get_int("dataset.n_splits");
    spec.sierpinski_depth = cfg.get_int("dataset.sierpinski_depth");
    return build_dataset(spec);
}

SequenceMode sequence_mode_for(const RunConfig& cfg) {
    return is_benchmark(cfg.get("dataset.name")) ? SequenceMode::SameClass : SequenceMode::Jitter;
}

NetworkState build_network(const RunConfig& cfg, uint64_t seed) {
    const Variant variant = variant_from_name(cfg.get("variant"));
    InhibitionParams inh;
    inh.radius = cfg.get_int("inhibition.radius");
    inh.strength = cfg.get_float("inhibition.strength");
    if (inh.strength < 0.0f || inh.strength > 1.0f) {
        throw ParamError("inhibition.strength: must be in [0,1]");
    }
    const Frontend fe = make_frontend(cfg, variant);
    return make_network(variant, fe.provenance(), cfg.get_int("grid"), fe.channels(),
                        cfg.get_int_list("layer.patches"), inh, cfg.get_float("rbf.sigma"), seed);
}

TrainOptions train_options(const RunConfig& cfg, uint64_t seed) {
    TrainOptions opt;
    opt.params.alpha = cfg.get_float("alpha");
    opt.params.eta = cfg.get_float("eta");
    opt.params.epochs = cfg.get_int("epochs");
    opt.params.sequence_length = cfg.get_int("sequence_length");
    opt.params.seed = seed;
    opt.params.variant = variant_from_name(cfg.get("variant"));
    opt.mode = sequence_mode_for(cfg);
    opt.rotation_range = cfg.get_float("train.jitter_rotation");
    opt.translation_range = cfg.get_float("train.jitter_translation");
    opt.objects_per_epoch = cfg.get_int("train.objects_per_epoch");
    return opt;
}

static void check_variant_compatibility(const RunConfig& cfg, const LabeledDataset& ds) {
    if (variant_from_name(cfg.get("variant")) == Variant::LiDogRgb && !ds.images.empty() &&
        ds.images.front().channels != 3) {
        throw ParamError("variant li-dog-rgb requires an RGB (3-plane) dataset");
    }
}

float readout_accuracy(const RunConfig& cfg, const NetworkState& net, const Frontend& frontend,
                       const LabeledDataset& ds, size_t* train_size, size_t* test_size) {
    const std::vector<size_t> train_idx = ds.indices(Split::Train);
    const std::vector<size_t> test_idx = ds.indices(Split::Test);
    if (train_idx.empty() || test_idx.empty()) {
        throw ParamError("readout: dataset needs both train and test items");
    }
    if (train_size) *train_size = train_idx.size();
    if (test_size) *test_size = test_idx.size();
    ReadoutHyper hyper;
    hyper.lambda = cfg.get_float("readout.lambda");
    hyper.epochs = cfg.get_int("readout.epochs");
    hyper.seed = cfg.get_u64("readout.seed");
    const FeatureMatrix train_f = extract_features(net, frontend, ds, train_idx);
    std::vector<int> train_labels;
    for (size_t i : train_idx) train_labels.push_back(ds.labels[i]);
    const LinearModel model = train_linear(train_f, train_labels, hyper);
    const FeatureMatrix test_f = extract_features(net, frontend, ds, test_idx);
    std::vector<int> test_labels;
    for (size_t i : test_idx) test_labels.push_back(ds.labels[i]);
    return evaluate(model, test_f, test_labels);
}

float run_single(const RunConfig& cfg, uint64_t seed_offset, size_t* train_size,
                 size_t* test_size) {
    const LabeledDataset ds = resolve_dataset(cfg, seed_offset);
    check_variant_compatibility(cfg, ds);
    const Variant variant = variant_from_name(cfg.get("variant"));
    const Frontend frontend = make_frontend(cfg, variant);
    NetworkState net = build_network(cfg, cfg.get_u64("seed") + seed_offset);
    train_network(net, frontend, ds, train_options(cfg, cfg.get_u64("seed") + seed_offset));
    return readout_accuracy(cfg, net, frontend, ds, train_size, test_size);
}

ExperimentResult run_experiment(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    cfg.save((fs::path(out_dir) / "config.txt").string());
    const int n_seeds = cfg.get_int("n_seeds");
    if (n_seeds < 1) throw ParamError("n_seeds: must be >= 1");

    ExperimentResult result;
    result.dataset = cfg.get("dataset.name");
    result.variant = cfg.get("variant");

    std::ofstream results((fs::path(out_dir) / "results.csv").string());
    if (!results) throw RuntimeFailure("run: cannot write results.csv in " + out_dir);
    results << "dataset,variant,seed,accuracy,train_size,test_size\n";
    for (int s = 0; s < n_seeds; ++s) {
        const uint64_t seed = cfg.get_u64("seed") + static_cast<uint64_t>(s);
        try {
            size_t train_size = 0, test_size = 0;
            const float acc = run_single(cfg, static_cast<uint64_t>(s), &train_size, &test_size);
            result.per_seed.push_back(acc);
            result.train_size = train_size;
            result.test_size = test_size;
            results << result.dataset << "," << result.variant << "," << seed << "," << acc << ","
                    << train_size << "," << test_size << "\n";
        } catch (const std::exception& e) {
            results << result.dataset << "," << result.variant << "," << seed << ",failed,0,0\n";
            std::ofstream((fs::path(out_dir) / "failures.log").string(), std::ios::app)
                << "seed " << seed << ": " << e.what() << "\n";
        }
        results.flush();
    }
    std::ofstream summary((fs::path(out_dir) / "summary.csv").string());
    summary << "dataset,variant,mean,sd\n";
    summary << result.dataset << "," << result.variant << "," << result.mean() << ","
            << result.sd() << "\n";
    return result;
}

void cmd_gen_data(const RunConfig& cfg, const std::string& out_dir) {
    const std::string& name = cfg.get("dataset.name");
    if (is_benchmark(name) || name == "dir") {
        throw ParamError("gen-data: dataset.name must be a generated symmetric set");
    }
    const LabeledDataset ds = resolve_dataset(cfg);
    fs::create_directories(out_dir);
    write_dataset(ds, out_dir);
    cfg.save((fs::path(out_dir) / "config.txt").string());
    // Per-class counts and mean measured symmetry.
    const int classes = ds.num_classes();
    for (int c = 0; c < classes; ++c) {
        size_t n = 0;
        double sym = 0.0;
        for (size_t i = 0; i < ds.size(); ++i) {
            if (ds.labels[i] == c) {
                ++n;
                sym += ds.measured_symmetry[i];
            }
        }
        std::printf("class %d: %zu images, mean measured symmetry %.3f\n", c, n,
                    n ? sym / static_cast<double>(n) : 0.0);
    }
}

void cmd_train(const RunConfig& cfg, const std::string& data_dir, const std::string& model_path) {
    RunConfig effective = cfg;
    if (!data_dir.empty()) {
        effective.set("dataset.name", "dir");
        effective.set("dataset.path", data_dir);
    }
    const LabeledDataset ds = resolve_dataset(effective);
    check_variant_compatibility(effective, ds);
    const Variant variant = variant_from_name(effective.get("variant"));
    const Frontend frontend = make_frontend(effective, variant);
    NetworkState net = build_network(effective, effective.get_u64("seed"));
    train_network(net, frontend, ds, train_options(effective, effective.get_u64("seed")));
    save_model(net, model_path);
    effective.save(model_path + ".cfg");
}

float cmd_eval(const RunConfig& cfg, const std::string& data_dir, const std::string& model_path,
               const std::string& out_dir) {
    RunConfig effective = cfg;
    if (!data_dir.empty()) {
        effective.set("dataset.name", "dir");
        effective.set("dataset.path", data_dir);
    }
    const NetworkState net = load_model(model_path);
    if (variant_from_name(effective.get("variant")) != net.variant) {
        effective.set("variant", variant_name(net.variant));
    }
    const LabeledDataset ds = resolve_dataset(effective);
    check_variant_compatibility(effective, ds);
    const Frontend frontend = make_frontend(effective, net.variant);
    size_t train_size = 0, test_size = 0;
    const float acc = readout_accuracy(effective, net, frontend, ds, &train_size, &test_size);

    fs::create_directories(out_dir);
    effective.save((fs::path(out_dir) / "config.txt").string());
    std::ofstream results((fs::path(out_dir) / "results.csv").string());
    results << "dataset,variant,seed,accuracy,train_size,test_size\n";
    results << effective.get("dataset.name") << "," << variant_name(net.variant) << ","
            << effective.get_u64("seed") << "," << acc << "," << train_size << "," << test_size
            << "\n";
    std::ofstream summary((fs::path(out_dir) / "summary.csv").string());
    summary << "dataset,variant,mean,sd\n";
    summary << effective.get("dataset.name") << "," << variant_name(net.variant) << "," << acc
            << ",0\n";
    std::printf("accuracy %.4f (train %zu, test %zu)\n", acc, train_size, test_size);
    return acc;
}

void cmd_inspect_rf(const std::string& model_path, int layer, int max_tiles,
                    const std::string& out_dir) {
    const NetworkState net = load_model(model_path);
    if (layer < 1 || layer > static_cast<int>(net.layers.size())) {
        throw ParamError("inspect-rf: layer index out of range (layers 1-" +
                         std::to_string(net.layers.size()) + ")");
    }
    const LayerState& ls = net.layers[static_cast<size_t>(layer - 1)];
    const int patch = ls.geometry.patch;
    const int channels = ls.geometry.in_channels;
    int tiles = ls.geometry.neurons();
    if (max_tiles > 0) tiles = std::min(tiles, max_tiles);
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(tiles)))));
    const int rows = (tiles + cols - 1) / cols;
    Image montage(rows * (patch + 1) + 1, cols * (patch + 1) + 1, 1);
    for (int t = 0; t < tiles; ++t) {
        const float* w = ls.weight_row(t);
        // Channel-averaged patch, min-max scaled per tile.
        std::vector<float> tile(static_cast<size_t>(patch) * patch, 0.0f);
        for (int c = 0; c < channels; ++c) {
            for (int p = 0; p < patch * patch; ++p) {
                tile[static_cast<size_t>(p)] += w[static_cast<size_t>(c) * patch * patch + p];
            }
        }
        const auto [mn, mx] = std::minmax_element(tile.begin(), tile.end());
        const float range = *mx - *mn;
        const int ty = (t / cols) * (patch + 1) + 1;
        const int tx = (t % cols) * (patch + 1) + 1;
        for (int y = 0; y < patch; ++y) {
            for (int x = 0; x < patch; ++x) {
                const float v = tile[static_cast<size_t>(y) * patch + x];
                montage.at(0, ty + y, tx + x) = range > 0.0f ? (v - *mn) / range : 0.0f;
            }
        }
    }
    fs::create_directories(out_dir);
    write_pnm((fs::path(out_dir) / ("layer" + std::to_string(layer) + "_rf.pgm")).string(), montage);
    std::printf("layer %d: wrote %d receptive-field tiles\n", layer, tiles);
}

} // namespace visnet
