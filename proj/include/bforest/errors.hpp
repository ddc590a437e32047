#pragma once

#include <stdexcept>
#include <string>

namespace bforest {

// Base for every error the engine raises. The CLI maps each subclass to a
// distinct exit code (see tools/bforest_cli.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, breakpoints or snapshot/config mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A frame that violates the stream contract (wrong arity, NaN, time going backwards).
class FrameError : public Error {
 public:
  using Error::Error;
};

// Unreadable/unwritable files and malformed documents.
class IoError : public Error {
 public:
  using Error::Error;
};

// A recorded span was evicted from the look-back buffer before it could be materialized.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace bforest
