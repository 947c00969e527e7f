#include "core/model_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"

namespace visnet {

static constexpr uint32_t kVersion = 1;
static constexpr uint8_t kFlagRbfSigma = 0x01;
static constexpr uint8_t kFlagMdStats = 0x02;

namespace {

// This codebase only targets little-endian hosts; serialize raw.
template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (static_cast<size_t>(in.gcount()) != sizeof(T)) {
        throw FormatError("model: truncated file " + path);
    }
    return v;
}

void put_f32_array(std::ostream& out, const float* data, size_t n) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(float)));
}

void get_f32_array(std::istream& in, float* data, size_t n, const std::string& path) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != n * sizeof(float)) {
        throw FormatError("model: truncated weight data in " + path);
    }
}

} // namespace

void save_model(const NetworkState& net, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw RuntimeFailure("model: cannot write " + tmp);
        out.write("VNSN", 4);
        put<uint32_t>(out, kVersion);
        put<uint8_t>(out, static_cast<uint8_t>(net.variant));
        put<uint8_t>(out, static_cast<uint8_t>(net.frontend));
        put<uint8_t>(out, static_cast<uint8_t>(net.layers.size()));
        put<uint32_t>(out, static_cast<uint32_t>(net.inhibition.radius));
        put<float>(out, net.inhibition.strength);
        for (const LayerState& layer : net.layers) {
            put<uint32_t>(out, static_cast<uint32_t>(layer.geometry.grid));
            put<uint32_t>(out, static_cast<uint32_t>(layer.geometry.patch));
            put<uint32_t>(out, static_cast<uint32_t>(layer.geometry.in_channels));
            uint8_t flags = 0;
            if (net.variant == Variant::Rbf) flags |= kFlagRbfSigma;
            if (layer.md_stats.has_value()) flags |= kFlagMdStats;
            put<uint8_t>(out, flags);
            put_f32_array(out, layer.weights.data(), layer.weights.size());
            if (flags & kFlagRbfSigma) put<float>(out, layer.rbf_sigma);
            if (flags & kFlagMdStats) {
                const MahalanobisStats& st = *layer.md_stats;
                put<uint64_t>(out, st.count);
                for (size_t i = 0; i < st.mean.size(); ++i) put<float>(out, static_cast<float>(st.mean[i]));
                for (size_t i = 0; i < st.m2.size(); ++i) put<float>(out, static_cast<float>(st.m2[i]));
            }
        }
        if (!out) throw RuntimeFailure("model: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path); // no partial model file on failure
}

NetworkState load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("model: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "VNSN", 4) != 0) {
        throw FormatError("model: bad magic in " + path);
    }
    const uint32_t version = get<uint32_t>(in, path);
    if (version != kVersion) {
        throw FormatError("model: unsupported format version " + std::to_string(version));
    }
    NetworkState net;
    const uint8_t variant = get<uint8_t>(in, path);
    if (variant > static_cast<uint8_t>(Variant::LiDogRgb)) {
        throw FormatError("model: unknown variant tag " + std::to_string(variant));
    }
    net.variant = static_cast<Variant>(variant);
    const uint8_t frontend = get<uint8_t>(in, path);
    if (frontend > 1) throw FormatError("model: unknown frontend tag");
    net.frontend = static_cast<StackProvenance>(frontend);
    const uint8_t layer_count = get<uint8_t>(in, path);
    net.inhibition.radius = static_cast<int>(get<uint32_t>(in, path));
    net.inhibition.strength = get<float>(in, path);
    for (int l = 0; l < layer_count; ++l) {
        LayerState layer;
        layer.geometry.grid = static_cast<int>(get<uint32_t>(in, path));
        layer.geometry.patch = static_cast<int>(get<uint32_t>(in, path));
        layer.geometry.in_channels = static_cast<int>(get<uint32_t>(in, path));
        if (layer.geometry.grid < 1 || layer.geometry.patch < 2 || layer.geometry.in_channels < 1) {
            throw FormatError("model: implausible layer geometry in " + path);
        }
        const uint8_t flags = get<uint8_t>(in, path);
        layer.weights.resize(static_cast<size_t>(layer.geometry.neurons()) * layer.geometry.fan_in());
        get_f32_array(in, layer.weights.data(), layer.weights.size(), path);
        layer.traces.assign(static_cast<size_t>(layer.geometry.neurons()), 0.0f);
        if (flags & kFlagRbfSigma) layer.rbf_sigma = get<float>(in, path);
        if (flags & kFlagMdStats) {
            MahalanobisStats st(static_cast<size_t>(layer.geometry.fan_in()));
            st.count = get<uint64_t>(in, path);
            for (auto& m : st.mean) m = get<float>(in, path);
            for (auto& m : st.m2) m = get<float>(in, path);
            layer.md_stats = std::move(st);
        }
        net.layers.push_back(std::move(layer));
    }
    return net;
}

} // namespace visnet
