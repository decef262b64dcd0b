#pragma once

#include <stdexcept>
#include <string>

namespace oldreg {

// Numerical failure (non-finite state, stalled iteration, collapsed time
// step).  The CLI maps this to exit code 2.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace oldreg
