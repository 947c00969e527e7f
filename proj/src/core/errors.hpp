#pragma once

#include <stdexcept>
#include <string>

namespace visnet {

// Bad arguments, bad config keys, out-of-range values. Maps to exit code 1.
class ParamError : public std::runtime_error {
public:
    explicit ParamError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or truncated input files. Maps to exit code 2.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Anything else that fails at run time (I/O, generation loops that cannot
// reach their target, degenerate numerical states). Maps to exit code 3.
class RuntimeFailure : public std::runtime_error {
public:
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace visnet
