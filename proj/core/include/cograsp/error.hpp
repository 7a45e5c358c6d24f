#pragma once

#include <stdexcept>
#include <string>

namespace cograsp {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments, malformed configs, violated preconditions.
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem and parsing failures.
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Raised by build_hull when the input has no 3D extent (<4 points or coplanar).
struct DegenerateInputError : ValidationError {
  explicit DegenerateInputError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace cograsp
