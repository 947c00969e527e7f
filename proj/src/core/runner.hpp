#pragma once

#include <string>

#include "core/config.hpp"
#include "core/dataset.hpp"
#include "core/frontend.hpp"
#include "core/learning.hpp"
#include "core/network.hpp"
#include "core/readout.hpp"

namespace visnet {

Frontend make_frontend(const RunConfig& cfg, Variant variant);

// Dataset resolution from config: a named symmetric set (generated in
// memory), "mnist"/"cifar10" (canonical files under dataset.path, optionally
// subsampled), or "dir" (a manifest directory written by gen-data).
// seed_offset shifts the generation/subsample seed for repeated-run protocols.
LabeledDataset resolve_dataset(const RunConfig& cfg, uint64_t seed_offset = 0);

// Sequence construction mode implied by the dataset name.
SequenceMode sequence_mode_for(const RunConfig& cfg);

NetworkState build_network(const RunConfig& cfg, uint64_t seed);

TrainOptions train_options(const RunConfig& cfg, uint64_t seed);

// Unsupervised training + linear readout on the train split, accuracy on the
// test split.
float readout_accuracy(const RunConfig& cfg, const NetworkState& net, const Frontend& frontend,
                       const LabeledDataset& ds, size_t* train_size = nullptr,
                       size_t* test_size = nullptr);

// Full protocol for one seed: build/load dataset, train, read out.
float run_single(const RunConfig& cfg, uint64_t seed_offset, size_t* train_size = nullptr,
                 size_t* test_size = nullptr);

// n_seeds repetitions; appends per-seed rows to <out_dir>/results.csv, the
// mean/sd row to <out_dir>/summary.csv, and the resolved config snapshot.
// Failed seeds are flushed as `failed` rows and skipped in the aggregate.
ExperimentResult run_experiment(const RunConfig& cfg, const std::string& out_dir);

// Command bodies shared by the C API.
void cmd_gen_data(const RunConfig& cfg, const std::string& out_dir);
void cmd_train(const RunConfig& cfg, const std::string& data_dir, const std::string& model_path);
float cmd_eval(const RunConfig& cfg, const std::string& data_dir, const std::string& model_path,
               const std::string& out_dir);
void cmd_inspect_rf(const std::string& model_path, int layer, int max_tiles,
                    const std::string& out_dir);

} // namespace visnet
