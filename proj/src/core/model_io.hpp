#pragma once

#include <string>

#include "core/network.hpp"

namespace visnet {

// Little-endian binary model file, magic "VNSN". Byte layout documented in
// docs/formats.md.
void save_model(const NetworkState& net, const std::string& path);
NetworkState load_model(const std::string& path);

} // namespace visnet
