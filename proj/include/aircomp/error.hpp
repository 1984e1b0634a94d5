#ifndef AIRCOMP_ERROR_HPP_
#define AIRCOMP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aircomp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// The optimizer was handed antenna positions that violate the region or
// minimum-spacing constraints.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// N antennas cannot be placed in the region at the required spacing.
class PlacementInfeasibleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace aircomp

#endif  // AIRCOMP_ERROR_HPP_
