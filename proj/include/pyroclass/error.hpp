#pragma once

#include <stdexcept>
#include <string>

namespace pyroclass {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments supplied by the caller (CLI exit code 1).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Problems with input data: files, formats, shapes, label content (CLI exit code 2).
class DataError : public Error {
public:
  using Error::Error;
};

class DimensionError : public DataError {
public:
  using DataError::DataError;
};

/// Training data lacks one of the two classes.
class SingleClassError : public DataError {
public:
  using DataError::DataError;
};

} // namespace pyroclass
