#pragma once

#include <stdexcept>
#include <string>

namespace rholab {

enum class ErrorKind {
  singular_evaluation,
  divergent_integral,
  out_of_range,
  unknown_name,
  inconsistent_flags,
  symmetry_inconsistency,
  no_convergence,
  degenerate_fit,
  trial_violates_pre,
  wrong_class,
  radius_too_small,
  config_invalid,
  measurement_incompatible,
  memory_guard,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` lets callers (and the CLI
/// exit-code mapping) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double relative_residual);
  int iterations() const noexcept { return iterations_; }
  double relative_residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Configuration diagnostics carry the offending line (0 if not line-bound)
/// and key.
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace rholab
