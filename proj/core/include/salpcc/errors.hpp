#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace salpcc {

/// Root of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, streams, degenerate clouds).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A file or stream could not be parsed. Carries the byte offset at which the
/// problem was detected.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : DataError(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Bad configuration key or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed in a way the caller cannot recover from.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace salpcc
