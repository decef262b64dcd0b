#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oldreg/record.hpp"
#include "oldreg/scenario.hpp"
#include "oldreg/solver.hpp"

// Quadrature of every norm appearing in the a-priori energy estimates, the
// time-series CSV, the runtime inequality monitors, and the regularization
// m-sweep experiment.

namespace oldreg {

// Instantaneous norms (midpoint/cell-sum quadrature on the MAC layout):
// interior faces carry weight hx*hy each, boundary faces are exactly zero.
struct InstantNorms {
  double kinetic_l2 = 0.0;         // int |v|^2
  double stress_l2 = 0.0;          // int |T|^2 (off-diagonal counted twice)
  double grad_v_lp_density = 0.0;  // int |grad_h v|^p at this instant
  double grad_t_lq_density = 0.0;  // int |grad_h T|^q at this instant
  SymTensor2 tm;                   // mean stress
  double reg_l1 = 0.0;             // (1/m)|T_M|^(q-2) int |T|
  double div_residual = 0.0;       // max-norm cell divergence
};

InstantNorms instant_norms(const State& s, const FluidParams& fp, const Grid& g);

// E = mu0 ||v||_2^2 + 1/2 ||T||_2^2, the quantity the discrete operators
// keep non-increasing (up to O(dt^2)) for a = 0 unforced flows.
double total_energy(const State& s, const FluidParams& fp, const Grid& g);

// Left-endpoint running integrals of the gradient norms, matching the
// explicit stepper: acc += dt * density(state at the start of the step).
struct TimeAccumulators {
  double grad_v_lp = 0.0;
  double grad_t_lq = 0.0;
};

EnergyRecord energy_record(const State& s, const FluidParams& fp, const Grid& g,
                           const TimeAccumulators& acc, double dt, double energy_residual);

// CSV schema (header written exactly):
// time,dt,kinetic_l2,stress_l2,grad_v_lp,grad_t_lq,tm_11,tm_12,tm_22,reg_l1,div_residual,energy_residual
void write_series_csv(std::ostream& os, const std::vector<EnergyRecord>& records);
void write_series_csv(const std::string& path, const std::vector<EnergyRecord>& records);

// Runtime monitor for the discrete counterparts of the energy estimates.
//
// Combined estimate: for a = 0 unforced runs the spatial operators cancel
// exactly, so each step may increase E only through the O(dt^2) explicit-
// Euler remainder; the monitor reports max_n (E_n - E_{n-1})_+ and the same
// normalized by dt_n^2.
//
// Separate velocity/stress estimates: between consecutive records the
// monitor forms the measured left-hand side (energy difference plus c times
// the dissipation increment) and the Holder-estimated right-hand side
//   phi |Omega| dt + sup||v||_2 |Omega|^{(q-2)/(2q)} (d grad_t_lq)^{1/q} dt^{1-1/q}
// (times (1 + |T| factors) for the stress equation), then reports the
// largest dissipation constant c for which LHS <= RHS holds across the whole
// trajectory, plus the violation with c = 0.  Constants are measured, not
// asserted; the exponent preconditions of the closure are flagged.
//
// Mean-stress estimate: |T_M(t)| <= C (1 + int_0^t ||v||_2 ||grad T||_q),
// with C measured as the smallest constant dominating the trajectory.
struct InequalityReport {
  // combined (corotational exact-cancellation) monitor
  bool corotational = false;        // a == 0: cancellation is exact only then
  double max_energy_residual = 0.0; // max_n (E_n - E_{n-1})_+
  double max_residual_rate = 0.0;   // max_n (E_n - E_{n-1})_+ / dt_n^2

  // velocity estimate: 1/2 d||v||^2 + c_vel * d(int ||grad v||_p^p) <= RHS
  double velocity_dissipation_constant = 0.0;
  double velocity_residual_at_zero = 0.0;

  // stress estimate: 1/2 d||T||^2 + c_str * eps * d(int ||grad T||_q^q) <= RHS
  double stress_dissipation_constant = 0.0;
  double stress_residual_at_zero = 0.0;

  // mean-stress Gronwall trajectory
  std::vector<double> time;
  std::vector<double> tm_norm;         // |T_M|(t)
  std::vector<double> gronwall_bound;  // C * (1 + int ||v||_2 ||grad T||_q)
  double gronwall_constant = 0.0;

  // exponent preconditions of the closure argument
  bool exponents_ok = false;
  std::string note;  // which combination fails when not admissible
};

InequalityReport inequality_monitor(const std::vector<EnergyRecord>& records,
                                    const FluidParams& fp, const Grid& g);

std::string format_inequality_report(const InequalityReport& r);

// Regularization sweep: run the scenario once per cutoff level m and track
// how the mean-stress regularization term decays.  A run that throws
// SolverError leaves NaN in its slots; the sweep continues.
struct SweepReport {
  std::vector<double> m_values;
  std::vector<double> reg_l1_finals;  // reg_l1 at t_end per m
  std::vector<double> sup_energy;     // sup over records of E(t) per m
  std::vector<double> ratio_table;    // reg_l1_finals[k+1] / reg_l1_finals[k]
  double energy_spread = 0.0;         // (max - min) / max over sup_energy
};

SweepReport m_sweep(const Scenario& base, const std::vector<double>& m_values);

std::string format_sweep_report(const SweepReport& r);

}  // namespace oldreg
