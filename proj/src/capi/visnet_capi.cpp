#include "visnet.h"

#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/runner.hpp"

using namespace visnet;

struct visnet_config {
    RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// Translate exceptions into the documented status codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return 0;
    } catch (const ParamError& e) {
        return set_error(1, e.what());
    } catch (const FormatError& e) {
        return set_error(2, e.what());
    } catch (const RuntimeFailure& e) {
        return set_error(3, e.what());
    } catch (const std::exception& e) {
        return set_error(3, e.what());
    }
}

int require(const void* p, const char* what) {
    return p ? 0 : set_error(1, std::string(what) + " is null");
}

std::string opt_str(const char* s) { return s ? std::string(s) : std::string(); }

} // namespace

extern "C" {

visnet_config* visnet_config_create(void) {
    try {
        return new visnet_config{};
    } catch (...) {
        return nullptr;
    }
}

void visnet_config_destroy(visnet_config* cfg) { delete cfg; }

int visnet_config_load(visnet_config* cfg, const char* path) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(path, "path"); rc) return rc;
    return guarded([&] { cfg->cfg.load_file(path); });
}

int visnet_config_set(visnet_config* cfg, const char* key, const char* value) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(key, "key"); rc) return rc;
    if (int rc = require(value, "value"); rc) return rc;
    return guarded([&] { cfg->cfg.set(key, value); });
}

int visnet_config_get(const visnet_config* cfg, const char* key, char* buf, size_t buf_len) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(key, "key"); rc) return rc;
    if (int rc = require(buf, "buf"); rc) return rc;
    if (buf_len == 0) return set_error(1, "buf_len is zero");
    return guarded([&] {
        const std::string& v = cfg->cfg.get(key);
        std::strncpy(buf, v.c_str(), buf_len - 1);
        buf[buf_len - 1] = '\0';
    });
}

const char* visnet_last_error(void) { return g_last_error.c_str(); }

int visnet_gen_data(const visnet_config* cfg, const char* out_dir) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(out_dir, "out_dir"); rc) return rc;
    return guarded([&] { cmd_gen_data(cfg->cfg, out_dir); });
}

int visnet_train(const visnet_config* cfg, const char* data_dir, const char* model_path) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(model_path, "model_path"); rc) return rc;
    return guarded([&] { cmd_train(cfg->cfg, opt_str(data_dir), model_path); });
}

int visnet_eval(const visnet_config* cfg, const char* data_dir, const char* model_path,
                const char* out_dir, float* accuracy) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(model_path, "model_path"); rc) return rc;
    if (int rc = require(out_dir, "out_dir"); rc) return rc;
    return guarded([&] {
        const float acc = cmd_eval(cfg->cfg, opt_str(data_dir), model_path, out_dir);
        if (accuracy) *accuracy = acc;
    });
}

int visnet_run(const visnet_config* cfg, const char* out_dir, float* mean_accuracy,
               float* sd_accuracy) {
    if (int rc = require(cfg, "cfg"); rc) return rc;
    if (int rc = require(out_dir, "out_dir"); rc) return rc;
    return guarded([&] {
        const ExperimentResult r = run_experiment(cfg->cfg, out_dir);
        if (r.per_seed.empty()) throw RuntimeFailure("run: every seed failed");
        if (mean_accuracy) *mean_accuracy = r.mean();
        if (sd_accuracy) *sd_accuracy = r.sd();
    });
}

int visnet_inspect_rf(const char* model_path, int layer, int max_tiles, const char* out_dir) {
    if (int rc = require(model_path, "model_path"); rc) return rc;
    if (int rc = require(out_dir, "out_dir"); rc) return rc;
    return guarded([&] { cmd_inspect_rf(model_path, layer, max_tiles, out_dir); });
}

} // extern "C"
