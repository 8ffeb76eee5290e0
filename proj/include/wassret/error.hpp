#pragma once

#include <stdexcept>
#include <string>

namespace wassret {

// Malformed or inconsistent input: files, configs, infeasible marginals.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A solver produced (or would produce) non-finite values, or failed to
// terminate within its pivot/iteration budget.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wassret
