#pragma once

#include <stdexcept>
#include <string>

namespace tailwave {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or inconsistent configuration (schema, ranges, causality).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

/// Evaluation outside a function's domain (light cone, nonpositive denominator).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A fit could not be performed (too few samples, sign changes, degenerate basis).
class FitError : public Error {
 public:
  explicit FitError(const std::string& msg) : Error(msg) {}
};

/// Data with vanishing leading tail coefficient; the attractor cannot be matched.
class NonGenericError : public Error {
 public:
  explicit NonGenericError(const std::string& msg) : Error(msg) {}
};

/// Field exceeded the blow-up guard or became non-finite.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& msg, double t) : Error(msg), time(t) {}
  double time;
};

}  // namespace tailwave
