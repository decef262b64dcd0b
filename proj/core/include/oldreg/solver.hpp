#pragma once

#include <vector>

#include "oldreg/error.hpp"
#include "oldreg/grid.hpp"
#include "oldreg/params.hpp"
#include "oldreg/poisson.hpp"
#include "oldreg/record.hpp"
#include "oldreg/scenario.hpp"

// Explicit MAC solver for the regularized viscoelastic system
//   div v = 0
//   dv/dt + div(v (x) v xi(|v|/m)) + grad pi - div(mu(D) D) = div T [+ f_v]
//   dT/dt + v.grad T - eps div(gamma(grad T) grad T) + T
//          + (1/m)|T_M|^(q-2) T = 2 mu0 D + B(v,T) [+ f_T]
// on a closed box with no-slip walls and zero-flux stress walls.
//
// The spatial operators are built so the semi-discrete energy
// E = mu0 ||v||_2^2 + 1/2 ||T||_2^2 obeys dE/dt <= 0 exactly for a = 0:
// convection and stress advection are cast in discretely skew-symmetric
// form, the shear components of the stress divergence and of the strain
// production are exact negative adjoints of each other (corner-interpolated
// T12 against a weighted corner strain average), and diffusion/relaxation/
// regularization terms pair negatively.  A forward-Euler step therefore
// increases E by at most O(dt^2).

namespace oldreg {

// Convection cutoff: 1 on [0, m], 0 on [2m, inf), cubic blend between with
// C^1 junctions; the derivative of the profile at m = 1 stays within [-2, 0]
// (minimum -3/2).  Non-increasing in s.
double cutoff_xi(double s, double m);

struct State {
  double time = 0.0;
  StaggeredVelocityField vel;
  SymTensorField stress;
  Array2D pressure;

  State() = default;
  explicit State(const Grid& g)
      : vel(g), stress(g), pressure(g.nx, g.ny, 0, 0) {}
};

// Ghost refresh for both fields (no-slip reflection + zero-flux copy).
void apply_boundary(State& s, const Grid& g);

// --- stencil-level operators (exposed so tests can probe the discrete
// --- energy identities independently of step()) -------------------------

// Cell/corner velocity-gradient samples.  d12_adj is the adjoint-consistent
// cell shear strain: the exact negative transpose of the shear part of
// elastic_force under the face/cell inner products, so
//   (v, elastic_force(T)) + (T, production-with-d12_adj)_sym = 0
// to rounding.  dudy_c/dvdx_c are plain 4-corner averages used for the
// coupling tensor and recorded gradient norms.
struct VelocityGradients {
  Array2D d11, d22;          // cells
  Array2D corner_a;          // du/dy at corners (ghost-reflected differences)
  Array2D corner_b;          // dv/dx at corners
  Array2D d12_corner;        // (a+b)/2
  Array2D d12_adj;           // cells, weighted adjoint average
  Array2D dudy_c, dvdx_c;    // cells, plain averages
};
VelocityGradients velocity_gradients(const StaggeredVelocityField& vel, const Grid& g);

struct MomentumForces {
  Array2D fu, fv;  // same staggering as u/v; only interior faces are filled

  explicit MomentumForces(const Grid& g)
      : fu(g.nx + 1, g.ny + 2, 0, 1), fv(g.nx + 2, g.ny + 1, 1, 0) {}
};

// div_h T on faces (corner-interpolated shear component).
MomentumForces elastic_force(const SymTensorField& ts, const Grid& g);

// div_h (mu(D) D) with mu evaluated at cells (normal parts) and corners
// (shear part); negative-semidefinite energy pairing by construction.
MomentumForces viscous_force(const StaggeredVelocityField& vel, const ViscosityLaw& law,
                             const Grid& g);

// Skew-symmetric cutoff convection: div_h(w (x) v) - (v/2) div_h w with
// w = v xi(|v|/m) interpolated to faces; (v, convection(v)) = 0 exactly.
MomentumForces convection(const StaggeredVelocityField& vel, double m, const Grid& g);

// Stress transport v.grad T in the matching skew form; (T, term)_sym = 0.
SymTensorField advection_term(const StaggeredVelocityField& vel, const SymTensorField& ts,
                              const Grid& g);

// eps div_h(gamma(grad T) grad T) with gamma at faces; dissipative pairing.
SymTensorField diffusion_term(const SymTensorField& ts, const DiffusionLaw& law, double epsilon,
                              const Grid& g);

// 2 mu0 D with the adjoint-consistent shear entry.
SymTensorField production_term(const VelocityGradients& gv, double mu0, const Grid& g);

// B(v,T) evaluated pointwise at cells from the averaged full gradient.
SymTensorField coupling_term(const VelocityGradients& gv, const SymTensorField& ts, double a,
                             const Grid& g);

// --- time stepping -------------------------------------------------------

// Stability-limited step size
//   dt = cfl * min(h/|v|_max, h^2/(2 d mu_max), h^2/(2 d eps gamma_max)),
// h = min(hx, hy), d = 2, with the current nonlinear coefficient maxima.
// The convective limit is skipped at rest.
double adaptive_dt(const State& s, const FluidParams& fp, const Grid& g);

// One explicit forward-Euler step of both equations from the given state,
// followed by the pressure projection (pressure = potential / dt).  Throws
// SolverError on non-finite results, with the offending field and cell.
State step(const State& s, const FluidParams& fp, const Grid& g, double dt);

struct RunResult {
  State final_state;
  std::vector<EnergyRecord> records;
  std::vector<State> snapshots;  // populated when scenario.capture is set
};

// Initial condition from the scenario selector.  Random velocities are
// projected to the discrete divergence-free space; the Taylor-Green-type
// vortex is sampled as a discrete curl, so it is divergence-free as built.
State initial_state(const Scenario& sc);

// Time loop with adaptive dt (capped by t_end - t), diagnostic records every
// record_interval steps plus the initial and final states, and optional
// state snapshots at the same cadence.  Deterministic for a fixed scenario
// and seed.  Throws SolverError if dt falls below 1e-12 * t_end.
RunResult run(const Scenario& sc);

}  // namespace oldreg
