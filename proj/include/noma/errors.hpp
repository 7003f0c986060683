// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace noma {

// Invalid parameter or configuration value. Maps to CLI exit code 1.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Convergence failure, overflow, or a non-finite intermediate value.
// Maps to CLI exit code 2.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace noma
