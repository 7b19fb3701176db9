#pragma once

#include <stdexcept>
#include <string>

namespace chaoscrypt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration (map names, config files, key files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Shapes that do not fit the operation (mismatched planes, degenerate sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A chaos-map evaluation produced a non-finite value.
class StepError : public Error {
 public:
  StepError(const std::string& map_name, const std::string& what)
      : Error(what), map_name_(map_name) {}

  const std::string& map_name() const noexcept { return map_name_; }

 private:
  std::string map_name_;
};

/// Trajectory left the domain a diagnostic requires.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Secret does not fit in the cover.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoscrypt
