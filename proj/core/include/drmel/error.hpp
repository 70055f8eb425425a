#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace drmel {

// Base class for every error raised by the library. The CLI maps each
// subclass to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed configuration, basis token, functional spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An observation outside the domain of the basis, or an otherwise invalid
// dataset. Carries the offending observation when one is known.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what,
                     std::optional<std::size_t> observation = std::nullopt)
      : Error(what), observation_(observation) {}

  std::optional<std::size_t> observation() const { return observation_; }

 private:
  std::optional<std::size_t> observation_;
};

// Non-finite intermediate while evaluating the likelihood.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Optimizer gave up: singular curvature that ridge escalation cannot fix.
class FitError : public Error {
 public:
  using Error::Error;
};

// Too many failed bootstrap replicates.
class BootstrapError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace drmel
