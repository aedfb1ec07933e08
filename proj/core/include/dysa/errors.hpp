#pragma once

#include <stdexcept>
#include <string>

namespace dysa {

// Invalid experiment configuration (bad key, out-of-range policy value,
// unsupported regularizer/constraint pairing). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble while reading configs or writing results. Exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dysa
