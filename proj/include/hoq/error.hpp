#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hoq {

/// Base class for every error raised by the library. Callers that only need
/// to distinguish "bad input" from "numerical trouble" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed type text. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Tensor-factor layouts that do not line up (matrix side, string length, permutation arity).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Work that would exceed a configured bound (string width, enumeration size, search cap).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace hoq
