#pragma once

#include <stdexcept>
#include <string>

namespace tsbib {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a schema or invariant (bad CSV row, negative count...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or inconsistent parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsbib
