#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ffedge {

// %.3e, for diagnostics
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Bad user input or violated precondition. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class NumericalFailure {
  budget_exceeded,
  non_convergence,
  singular_operator,
  precision_insufficient,
  residual_blowup,
  window_too_small,
  out_of_support,
  degenerate_curvature,
};

const char* to_string(NumericalFailure kind);

// A computation ran but could not certify its result. Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(NumericalFailure kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  NumericalFailure kind() const { return kind_; }

 private:
  NumericalFailure kind_;
};

}  // namespace ffedge
