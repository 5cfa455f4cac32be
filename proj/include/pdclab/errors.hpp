#pragma once

#include <stdexcept>
#include <string>

namespace pdclab {

/// Raised when a caller passes parameters outside a type's invariants.
/// The CLI maps it to exit code 1.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

/// Raised when a computation cannot produce a finite, converged result.
/// The CLI maps it to exit code 2.
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string &what) : std::runtime_error(what) {}
};

} // namespace pdclab
