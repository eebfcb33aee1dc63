#pragma once

#include <stdexcept>
#include <string>

namespace introscore {

/// Bad input: malformed files, out-of-contract arguments, failed validation.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate numerics: flat posteriors, rank-deficient designs, zero
/// variance. The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace introscore
