#pragma once

#include <stdexcept>

namespace specluster {

// Bad input: malformed files, out-of-range ids, parameters violating a contract.
// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a valid result (rank deficiency,
// non-finite values). The CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace specluster
