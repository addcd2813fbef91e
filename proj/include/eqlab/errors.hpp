#pragma once
#include <stdexcept>
#include <string>

namespace eqlab {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: malformed config, violated preconditions, parameter constraints.
// CLI maps these to exit code 2.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Numerical failure after retries: non-convergent solver, failed certification.
// CLI maps these to exit code 3.
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Requested work exceeds a configured cap (composition degree, tree atoms).
struct CapacityError : ValidationError {
  explicit CapacityError(const std::string& what) : ValidationError(what) {}
};

}  // namespace eqlab
