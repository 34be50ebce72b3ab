#pragma once

#include <stdexcept>
#include <string>

namespace pointforge {

/// Invalid arguments, malformed inputs, violated preconditions. CLI exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to reach its tolerance. CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// File I/O or serialization failure. CLI exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pointforge
