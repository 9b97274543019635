#pragma once

#include <stdexcept>
#include <string>

namespace stochflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape, grid or precondition violations.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, blow-up, CFL violations.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stochflow
