#pragma once

#include <stdexcept>
#include <string>

namespace cuspwave {

// Argument outside the mathematical domain of an operation (r < r0, mu < 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Caller violated a documented precondition (grid too coarse, inadmissible pair, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown inside the library (eigensolver failure, caustic, boundary hit).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cuspwave
