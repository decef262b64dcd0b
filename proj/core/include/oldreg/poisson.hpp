#pragma once

#include "oldreg/error.hpp"
#include "oldreg/grid.hpp"

namespace oldreg {

struct ProjectionResult {
  StaggeredVelocityField vel;  // u_star minus a discrete gradient
  Array2D phi;                 // cell-centred potential, mean pinned to zero
  int iterations = 0;
  double max_div = 0.0;        // achieved max-norm cell divergence
};

// Helmholtz projection on the MAC grid: solves the 5-point Neumann Poisson
// problem div grad phi = div u_star by conjugate gradients (constant mode
// removed from the right-hand side), then subtracts grad phi on interior
// faces.  Boundary faces are untouched, so no-slip walls are preserved and
// div(result) = (CG residual) identically; iteration stops once that
// residual is below tol in the max norm.  Throws SolverError when the
// iteration cap is hit first.
ProjectionResult project(const StaggeredVelocityField& u_star, const Grid& g, double tol,
                         int max_iter = 50000);

}  // namespace oldreg
