#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fujita {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside its mathematical domain (t < 0, s outside (0,1), ...).
struct DomainError : Error {
  using Error::Error;
};

/// Field with non-finite samples or mismatched grids.
struct InvalidFieldError : Error {
  using Error::Error;
};

struct UnsupportedDimensionError : Error {
  using Error::Error;
};

/// A theorem hypothesis fails, so the requested exponent is undefined
/// (e.g. d/(d-2s) when d <= 2s).
struct UndefinedExponentError : Error {
  using Error::Error;
};

struct ParameterDomainError : Error {
  using Error::Error;
};

/// Fixed-point iteration stopped contracting; carries the measured ratio.
struct ContractionFailureError : Error {
  double measured_ratio;
  ContractionFailureError(const std::string& msg, double ratio)
      : Error(msg), measured_ratio(ratio) {}
};

struct NoConvergenceError : Error {
  using Error::Error;
};

/// Test-function quotient is not integrable: the numerator stays large
/// where the cutoff base vanishes.
struct CutoffConstructionError : Error {
  using Error::Error;
};

struct RangeError : Error {
  using Error::Error;
};

struct FitError : Error {
  using Error::Error;
};

struct WindowError : Error {
  using Error::Error;
};

struct FamilyError : Error {
  using Error::Error;
};

/// Configuration parse/validation failure; carries one message per problem,
/// each prefixed with the offending line number where known.
struct ConfigError : Error {
  std::vector<std::string> messages;
  explicit ConfigError(std::vector<std::string> msgs)
      : Error(join(msgs)), messages(std::move(msgs)) {}
  explicit ConfigError(const std::string& msg)
      : Error(msg), messages{msg} {}

 private:
  static std::string join(const std::vector<std::string>& msgs) {
    std::string out;
    for (const auto& m : msgs) {
      if (!out.empty()) out += "\n";
      out += m;
    }
    return out;
  }
};

}  // namespace fujita
