#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace visnet {

// Flat `key = value` configuration with dotted namespaces. Every tunable has
// a documented default; unknown keys are rejected on set.
class RunConfig {
public:
    RunConfig(); // populated with defaults

    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value); // throws ParamError on unknown key

    const std::string& get(const std::string& key) const;
    int get_int(const std::string& key) const;
    float get_float(const std::string& key) const;
    uint64_t get_u64(const std::string& key) const;
    std::vector<float> get_float_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;

    // Fully-resolved snapshot, keys sorted, written into artifact dirs.
    std::string serialize() const;
    void save(const std::string& path) const;

    static const std::map<std::string, std::string>& defaults();

private:
    std::map<std::string, std::string> values_;
};

} // namespace visnet
