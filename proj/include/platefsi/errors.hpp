#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace platefsi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a documented precondition. `key()` names the field.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class EmptyTermSet : public Error {
 public:
  EmptyTermSet() : Error("term set is empty") {}
};

class IncompatibleAnisotropy : public Error {
 public:
  using Error::Error;
};

/// |N_L| is too small relative to its constituent parts for a stable division.
class NearResonance : public Error {
 public:
  using Error::Error;
};

class ShiftOutOfRange : public Error {
 public:
  using Error::Error;
};

class ContourFailure : public Error {
 public:
  using Error::Error;
};

class SolverSingular : public Error {
 public:
  SolverSingular(std::size_t mode, const std::string& what)
      : Error("mode " + std::to_string(mode) + ": " + what), mode_(mode) {}
  std::size_t mode() const noexcept { return mode_; }

 private:
  std::size_t mode_;
};

class NoContraction : public Error {
 public:
  using Error::Error;
};

}  // namespace platefsi
