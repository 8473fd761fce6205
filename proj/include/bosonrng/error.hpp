#pragma once

#include <stdexcept>
#include <string>

namespace bosonrng {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a density or transition law.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (non-positive shapes, zero run length, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Root finding did not meet its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : Error(what + " [bracket " + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo_(lo), hi_(hi) {}

  double lower() const { return lo_; }
  double upper() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Too few samples or bits for a statistical test.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Instrument noise too large for the requested bits per run.
class GateRefused : public Error {
 public:
  using Error::Error;
};

/// Failure of one run inside a batch, tagged with its position.
class RunError : public Error {
 public:
  RunError(std::size_t position, const std::string& what)
      : Error("run " + std::to_string(position) + ": " + what), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace bosonrng
