#pragma once

#include <stdexcept>
#include <string>

namespace fieldforge {

// Error taxonomy maps onto process exit codes (see tools/): config=2,
// numeric=3, io=4. Anything else escaping main is a bug.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape/contract violations inside the math stack.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fieldforge
