#pragma once

#include <stdexcept>
#include <string>

namespace forster {

// Base for every error raised by the library. The CLI maps PhysicsError
// subclasses to exit code 1 and ConfigError to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhysicsError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidLevelError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class MissingDataError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class NonConvergenceError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class SelectionRuleError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class EmptyBasisError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class StepUnderflowError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class NoSolutionError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class BudgetExhaustedError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

}  // namespace forster
