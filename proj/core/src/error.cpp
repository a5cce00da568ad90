#include "rholab/error.hpp"

#include <cstdio>

namespace rholab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::singular_evaluation: return "singular-evaluation";
    case ErrorKind::divergent_integral: return "divergent-integral";
    case ErrorKind::out_of_range: return "parameter-out-of-range";
    case ErrorKind::unknown_name: return "unknown-name";
    case ErrorKind::inconsistent_flags: return "inconsistent-flags";
    case ErrorKind::symmetry_inconsistency: return "symmetry-inconsistency";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::degenerate_fit: return "degenerate-fit";
    case ErrorKind::trial_violates_pre: return "trial-violates-pre";
    case ErrorKind::wrong_class: return "wrong-class";
    case ErrorKind::radius_too_small: return "radius-too-small";
    case ErrorKind::config_invalid: return "config-invalid";
    case ErrorKind::measurement_incompatible: return "measurement-incompatible";
    case ErrorKind::memory_guard: return "memory-guard";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

namespace {
std::string convergence_message(int iterations, double residual) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "no convergence after %d iterations (relative residual %.3e)",
                iterations, residual);
  return buf;
}

std::string config_message(int line, const std::string& field, const std::string& message) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += "'" + field + "': ";
  return out + message;
}
}  // namespace

NoConvergence::NoConvergence(int iterations, double relative_residual)
    : Error(ErrorKind::no_convergence, convergence_message(iterations, relative_residual)),
      iterations_(iterations),
      residual_(relative_residual) {}

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : Error(ErrorKind::config_invalid, config_message(line, field, message)),
      line_(line),
      field_(std::move(field)) {}

}  // namespace rholab
