#pragma once

#include <stdexcept>
#include <string>

namespace mvip {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  BacktrackExhausted,
  NonFiniteIterate,
  InsufficientTrace,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mvip
