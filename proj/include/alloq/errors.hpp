#pragma once

#include <stdexcept>
#include <string>

namespace alloq {

/// Requested mass exceeds the available supply.
struct InsufficientMassError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A candidate or construction step violates feasibility.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An allocation does not have the structure an operation requires.
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to produce a usable result.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace alloq
