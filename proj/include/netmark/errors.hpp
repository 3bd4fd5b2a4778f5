#pragma once

#include <stdexcept>
#include <string>

namespace netmark {

/// Input is well-formed but outside the regime the closed-form machinery
/// supports (e.g. budgets below the no-binding surplus threshold).
class UnsupportedConfiguration : public std::runtime_error {
 public:
  explicit UnsupportedConfiguration(const std::string& what)
      : std::runtime_error(what) {}
};

/// A floating-point result violated a model guarantee by more than the
/// documented slack.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netmark
