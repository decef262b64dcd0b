#pragma once

#include <string>
#include <vector>

#include "oldreg/solver.hpp"

// Manufactured-solution convergence harness on the unit square: a smooth
// divergence-free velocity (curl of a sin^2 streamfunction, no-slip
// compatible) and a zero-mean stress with exactly zero wall-normal gradient,
// driven by analytically derived body forces at p = q = 2, a = 0 (constant
// coefficients, so every forcing term has a closed form).

namespace oldreg {

struct ManufacturedSolution {
  double u0 = 0.25;  // velocity amplitude
  double s0 = 0.2;   // stress amplitude
  double mu1 = 0.05, gamma1 = 0.05, epsilon = 1.0, mu0 = 1.0, m = 10.0;

  double exact_u(double x, double y, double t) const;
  double exact_v(double x, double y, double t) const;
  SymTensor2 exact_stress(double x, double y, double t) const;

  double force_u(double x, double y, double t) const;
  double force_v(double x, double y, double t) const;
  SymTensor2 force_stress(double x, double y, double t) const;
};

struct ManufacturedCase {
  ManufacturedSolution sol;
  FluidParams params;  // laws, coefficients and forcing wired to `sol`
};

ManufacturedCase manufactured_case();

// Exact solution sampled at the staggered positions at time t (ghosts
// refreshed, pressure zero).
State sampled_state(const ManufacturedSolution& sol, const Grid& g, double t);

struct FieldErrors {
  double velocity = 0.0;  // L2 error of (u, v) at face positions
  double stress = 0.0;    // L2 error of T at cell centres
  double combined = 0.0;
};

FieldErrors manufactured_errors(const State& s, const ManufacturedSolution& sol, const Grid& g);

// March from the sampled initial state with a fixed step (the last step is
// shortened to land on t_end exactly).
State advance_fixed_dt(const ManufacturedCase& c, const Grid& g, double dt, double t_end);

// sqrt of the summed squared difference of all prognostic fields, used for
// the fixed-grid temporal refinement study.
double state_difference(const State& a, const State& b, const Grid& g);

struct SpatialConvergence {
  std::vector<int> grids;
  std::vector<double> errors;  // combined error per grid
  std::vector<double> orders;  // log2(err(2h)/err(h)) per refinement
  double fitted_order = 0.0;   // least-squares slope of log err vs log h
};

SpatialConvergence spatial_convergence(const ManufacturedCase& c, const std::vector<int>& grids,
                                       double dt, double t_end);

struct TemporalConvergence {
  std::vector<double> dts;
  std::vector<double> diffs;   // ||S(dt_k) - S(dt_{k+1})|| at t_end
  std::vector<double> orders;  // pairwise observed orders
  double fitted_order = 0.0;
};

TemporalConvergence temporal_convergence(const ManufacturedCase& c, int n,
                                         const std::vector<double>& dts, double t_end);

std::string format_spatial(const SpatialConvergence& t);
std::string format_temporal(const TemporalConvergence& t);

}  // namespace oldreg
