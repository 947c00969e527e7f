#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace visnet {

const std::map<std::string, std::string>& RunConfig::defaults() {
    static const std::map<std::string, std::string> d = {
        // learning
        {"variant", "simplified"},
        {"alpha", "0.01"},
        {"eta", "0.8"},
        {"epochs", "5"},
        {"sequence_length", "5"},
        {"seed", "1"},
        {"train.objects_per_epoch", "0"}, // 0 = all training objects each epoch
        {"train.jitter_rotation", "180"},   // degrees, symmetry-set view jitter
        {"train.jitter_translation", "0.2"}, // fraction of side, per axis

        // network geometry
        {"grid", "80"},
        {"layer.patches", "6,8,10,12"},
        {"rbf.sigma", "0.5"},
        {"inhibition.radius", "2"},
        {"inhibition.strength", "0.5"},

        // frontend
        {"gabor.frequencies", "0.2,0.4,0.6,0.8"},
        {"gabor.orientations", "0,0.78539816,1.57079633,2.35619449"},
        {"gabor.phases", "0,3.14159265"},
        {"gabor.sigma", "0"}, // 0 = bandwidth-linked 0.56/f
        {"gabor.gamma", "0.5"},
        {"gabor.kernel_size", "15"},
        {"dog.sigma1", "1.0"},
        {"dog.sigma2", "1.2"},
        {"dog.k", "0.6"},
        {"dog.kernel_size", "3"},

        // dataset
        {"dataset.name", "TWOCLASSES-SQUARE"}, // a named symmetric set, mnist, cifar10, or dir
        {"dataset.path", ""},                  // data files / directory when required
        {"dataset.count", "1000"},
        {"dataset.image_size", "32"},
        {"dataset.seed", "1"},
        {"dataset.n_splits", "3"},
        {"dataset.sierpinski_depth", "3"},
        {"dataset.per_class_train", "0"}, // >0 = seeded stratified subset (mnist/cifar)
        {"dataset.per_class_test", "0"},

        // readout
        {"readout.lambda", "1e-4"},
        {"readout.epochs", "50"},
        {"readout.seed", "7"},

        // experiment harness
        {"n_seeds", "10"},
    };
    return d;
}

RunConfig::RunConfig() : values_(defaults()) {}

void RunConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ParamError("config: unknown key '" + key + "'");
    it->second = value;
}

static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParamError("config: missing '=' at " + path + ":" + std::to_string(lineno));
        }
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ParamError("config: unknown key '" + key + "'");
    return it->second;
}

int RunConfig::get_int(const std::string& key) const {
    try {
        return std::stoi(get(key));
    } catch (const ParamError&) {
        throw;
    } catch (const std::exception&) {
        throw ParamError("config: key '" + key + "' is not an integer");
    }
}

float RunConfig::get_float(const std::string& key) const {
    try {
        return std::stof(get(key));
    } catch (const ParamError&) {
        throw;
    } catch (const std::exception&) {
        throw ParamError("config: key '" + key + "' is not a number");
    }
}

uint64_t RunConfig::get_u64(const std::string& key) const {
    try {
        return std::stoull(get(key));
    } catch (const ParamError&) {
        throw;
    } catch (const std::exception&) {
        throw ParamError("config: key '" + key + "' is not an unsigned integer");
    }
}

std::vector<float> RunConfig::get_float_list(const std::string& key) const {
    std::vector<float> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stof(item));
        } catch (const std::exception&) {
            throw ParamError("config: key '" + key + "' has a non-numeric element '" + item + "'");
        }
    }
    return out;
}

std::vector<int> RunConfig::get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (float f : get_float_list(key)) out.push_back(static_cast<int>(f));
    return out;
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw RuntimeFailure("config: cannot write " + path);
    out << serialize();
}

} // namespace visnet
