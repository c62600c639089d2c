#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sszd {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested direction count or dimension is out of range.
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// A probability-zero random event (rank-deficient Gaussian draw) kept recurring.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

/// Finite-difference step at or below the configured floor.
class DiscretizationUnderflow : public Error {
 public:
  using Error::Error;
};

/// The objective returned a non-finite value.
class OracleFailure : public Error {
 public:
  static constexpr std::size_t kBasePoint = static_cast<std::size_t>(-1);

  OracleFailure(const std::string& what, std::size_t direction)
      : Error(what), direction_(direction) {}

  /// Index of the perturbed direction, or kBasePoint for F(x, z) itself.
  std::size_t direction() const noexcept { return direction_; }

 private:
  std::size_t direction_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace sszd
