#pragma once

#include <stdexcept>
#include <string>

namespace homonym {

// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (corpus lines, files, groupings).
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical precondition or invariant was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace homonym
