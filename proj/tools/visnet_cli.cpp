#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "visnet.h"

namespace {

struct ConfigArgs {
    std::string config_file;
    std::vector<std::string> sets; // key=value overrides, applied after the file
};

void add_config_options(CLI::App* app, ConfigArgs* args) {
    app->add_option("-c,--config", args->config_file, "Configuration file (key = value lines)");
    app->add_option("-s,--set", args->sets, "Override a config key, e.g. --set alpha=0.02")
        ->take_all();
}

int fail(int rc) {
    const char* msg = visnet_last_error();
    if (msg && *msg) std::fprintf(stderr, "error: %s\n", msg);
    return rc;
}

int apply_config(visnet_config* cfg, const ConfigArgs& args) {
    if (!args.config_file.empty()) {
        if (int rc = visnet_config_load(cfg, args.config_file.c_str())) return rc;
    }
    for (const std::string& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return 1;
        }
        if (int rc = visnet_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) {
            return rc;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical trace-learning visual network"};
    app.require_subcommand(1);

    ConfigArgs gen_args, train_args, eval_args, run_args;
    std::string gen_out, train_data, train_model, eval_data, eval_model, eval_out, run_out;
    std::string rf_model, rf_out = "rf";
    int rf_layer = 1, rf_max_tiles = 64;

    CLI::App* gen = app.add_subcommand("gen-data", "Generate a symmetric-image dataset");
    add_config_options(gen, &gen_args);
    gen->add_option("-o,--out", gen_out, "Output directory")->required();

    CLI::App* train = app.add_subcommand("train", "Train a network and save the model");
    add_config_options(train, &train_args);
    train->add_option("-d,--data", train_data, "Dataset directory from gen-data");
    train->add_option("-m,--model", train_model, "Model output path")->required();

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a saved model with a linear readout");
    add_config_options(eval, &eval_args);
    eval->add_option("-d,--data", eval_data, "Dataset directory from gen-data");
    eval->add_option("-m,--model", eval_model, "Model path")->required();
    eval->add_option("-o,--out", eval_out, "Artifact directory")->required();

    CLI::App* run = app.add_subcommand("run", "Full multi-seed experiment");
    add_config_options(run, &run_args);
    run->add_option("-o,--out", run_out, "Artifact directory")->required();

    CLI::App* rf = app.add_subcommand("inspect-rf", "Render receptive-field montages");
    rf->add_option("-m,--model", rf_model, "Model path")->required();
    rf->add_option("-l,--layer", rf_layer, "Layer index (1-based)");
    rf->add_option("-n,--max-tiles", rf_max_tiles, "Tile budget (<= 0 renders all neurons)");
    rf->add_option("-o,--out", rf_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    visnet_config* cfg = visnet_config_create();
    if (!cfg) {
        std::fprintf(stderr, "error: out of memory\n");
        return 3;
    }
    int rc = 0;
    if (gen->parsed()) {
        rc = apply_config(cfg, gen_args);
        if (!rc) rc = visnet_gen_data(cfg, gen_out.c_str());
    } else if (train->parsed()) {
        rc = apply_config(cfg, train_args);
        if (!rc) rc = visnet_train(cfg, train_data.c_str(), train_model.c_str());
    } else if (eval->parsed()) {
        rc = apply_config(cfg, eval_args);
        if (!rc) rc = visnet_eval(cfg, eval_data.c_str(), eval_model.c_str(), eval_out.c_str(),
                                  nullptr);
    } else if (run->parsed()) {
        rc = apply_config(cfg, run_args);
        float mean = 0.0f, sd = 0.0f;
        if (!rc) rc = visnet_run(cfg, run_out.c_str(), &mean, &sd);
        if (!rc) std::printf("mean accuracy %.4f, sd %.4f\n", mean, sd);
    } else if (rf->parsed()) {
        rc = visnet_inspect_rf(rf_model.c_str(), rf_layer, rf_max_tiles, rf_out.c_str());
    }
    visnet_config_destroy(cfg);
    return rc ? fail(rc) : 0;
}
