#pragma once

#include <stdexcept>
#include <string>

namespace lidartrack {

/// Composition of transforms whose frame labels do not chain.
class FrameError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or inconsistent input data. The message names the file and,
/// where known, the line or byte offset.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid pipeline configuration (unknown keys, out-of-range values,
/// masks naming unknown cameras).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lidartrack
