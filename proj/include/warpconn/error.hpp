#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpconn {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An expression was evaluated outside its domain (log of a non-positive
/// number, division by zero, ...). The message names the subexpression.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-positive-definite metric, shape mismatch between fields and charts,
/// and similar failures of the geometric preconditions.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario, preset parameters or audit configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpconn
