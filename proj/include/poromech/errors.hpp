#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace poromech {

using InvalidArgument = std::invalid_argument;

/// Geometric or algebraic degeneracy detected during evaluation.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero or structurally absent pivot in an incomplete factorisation.
class FactorizationBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LinearSolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton did not reach the requested tolerance; carries the residual history.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : std::runtime_error(what), line(line), key(std::move(key)) {}
  int line;
  std::string key;
};

}  // namespace poromech
