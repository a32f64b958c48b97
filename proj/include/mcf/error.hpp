#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class SizeMismatch : public Error {
public:
  using Error::Error;
};

class FrequencyOutOfRange : public Error {
public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

/// Raised by the time loop as soon as any phase field holds a NaN or Inf.
class NonFiniteField : public Error {
public:
  NonFiniteField(long step, std::size_t phase)
      : Error("non-finite value in phase " + std::to_string(phase + 1) +
              " after step " + std::to_string(step)),
        step_(step), phase_(phase) {}

  long step() const noexcept { return step_; }
  std::size_t phase() const noexcept { return phase_; }

private:
  long step_;
  std::size_t phase_;
};

/// Configuration error carrying the dotted path of the offending entry.
class ConfigInvalid : public Error {
public:
  ConfigInvalid(std::string path, const std::string &what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

/// A pairwise coefficient set that admits no per-phase split.
struct NotAdditive {
  std::string reason;
};

} // namespace mcf
