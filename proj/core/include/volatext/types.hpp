#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace volatext {

/// Dense 0-based vocabulary index.
using TermId = std::uint32_t;

/// Raised for bad input data (unreadable files, empty corpora, malformed
/// artifacts). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller violates an operation's precondition in a way that
/// indicates a configuration mistake rather than a bug (e.g. history longer
/// than the corpus).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace volatext
