#pragma once

#include <stdexcept>
#include <string>

namespace ugnn {

/// Bad argument values (out-of-range counts, invalid flags).
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Shape or structure mismatches (non-square matrix, dimension chains).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (CSV contents, prices, indicators).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values or diverging computations.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// An API contract was broken by the caller (programming error).
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ugnn
