#pragma once

#include <functional>
#include <memory>
#include <string>

#include "oldreg/constitutive.hpp"
#include "oldreg/tensor.hpp"

namespace oldreg {

// Optional body forces in both equations, used by the manufactured-solution
// convergence harness.  Evaluated at the staggered positions of the unknowns
// at the beginning-of-step time.
struct Forcing {
  std::function<double(double x, double y, double t)> fu;            // x-momentum
  std::function<double(double x, double y, double t)> fv;            // y-momentum
  std::function<SymTensor2(double x, double y, double t)> fstress;   // stress equation
};

struct FluidParams {
  double epsilon = 0.1;  // stress-diffusion scale, > 0
  double mu0 = 1.0;      // production coefficient, > 0
  double a = 0.0;        // convected-frame parameter, in [-1, 1]
  double m = 1.0;        // cutoff/regularization level, >= 1
  ViscosityLaw viscosity;
  DiffusionLaw diffusion;
  double t_end = 1.0;
  double cfl = 0.4;

  // Projection controls (the Poisson solve inside step()).
  double project_tol = 1e-10;
  int project_max_iter = 50000;

  std::shared_ptr<const Forcing> forcing;  // null for physical runs

  double p() const { return viscosity.p; }
  double q() const { return diffusion.q; }
};

// The a-priori estimates close only for exponent pairs in the admissible set
//   (6/5 < p <= 2 and q >= 4)  or  (p > 2 and q > 2p/(p-1)).
inline bool exponents_admissible(double p, double q) {
  if (p > 1.2 && p <= 2.0) return q >= 4.0;
  if (p > 2.0) return q > 2.0 * p / (p - 1.0);
  return false;
}

// Human-readable reason when the pair is outside the admissible set.
std::string admissibility_note(double p, double q);

}  // namespace oldreg
