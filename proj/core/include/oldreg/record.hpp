#pragma once

namespace oldreg {

// One diagnostics sample.  Norm fields are squared L2 integrals; grad_v_lp
// and grad_t_lq are running time integrals of the p-th/q-th power gradient
// norms (left-endpoint accumulation); energy_residual is the positive part
// of the last step's increase of mu0 ||v||^2 + 1/2 ||T||^2.
struct EnergyRecord {
  double time = 0.0;
  double dt = 0.0;
  double kinetic_l2 = 0.0;       // ||v||_{L2}^2
  double stress_l2 = 0.0;        // ||T||_{L2}^2
  double grad_v_lp = 0.0;        // int_0^t ||grad v||_p^p
  double grad_t_lq = 0.0;        // int_0^t ||grad T||_q^q
  double tm_11 = 0.0, tm_12 = 0.0, tm_22 = 0.0;  // mean stress components
  double reg_l1 = 0.0;           // ||(1/m)|T_M|^(q-2) T||_{L1}
  double div_residual = 0.0;     // max-norm cell divergence
  double energy_residual = 0.0;  // (E_n - E_{n-1})_+
};

}  // namespace oldreg
