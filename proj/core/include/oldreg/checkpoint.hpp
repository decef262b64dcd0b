#pragma once

#include <stdexcept>
#include <string>

#include "oldreg/solver.hpp"

// Plain-text state checkpoints.  Layout:
//   OLDREG1 nx ny lx ly time
//   u          <- section label, then (ny) rows of (nx+1) values
//   v          <- (ny+1) rows of (nx) values
//   pressure   <- (ny) rows of (nx) values
//   T11 / T12 / T22   <- (ny) rows of (nx) values each
// Values are printed with 17 significant digits, so write -> read -> write
// reproduces the file byte for byte.  Ghost values are not stored; they are
// rebuilt on load.

namespace oldreg {

struct CheckpointError : std::runtime_error {
  explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Checkpoint {
  Grid grid;
  State state;
};

void write_checkpoint(const std::string& path, const State& s, const Grid& g);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace oldreg
