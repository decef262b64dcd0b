#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "oldreg/tensor.hpp"

// Carreau-type material laws: shear-dependent viscosity mu(D) acting on the
// symmetric velocity gradient and a nonlinear diffusivity gamma(G) acting on
// the stress gradient (a rank-3 array).  Both laws are total functions; the
// positivity/admissibility invariants of the parameter structs are enforced
// when a scenario is validated, not here.

namespace oldreg {

struct ViscosityLaw {
  double mu1 = 1.0;    // amplitude, > 0
  double kappa = 0.1;  // regularization shift, > 0
  double p = 2.0;      // growth exponent, > 1
};

struct DiffusionLaw {
  double gamma1 = 1.0;   // amplitude, > 0
  double kappa_t = 0.1;  // regularization shift, > 0
  double q = 4.0;        // growth exponent, > 1
};

// mu(D) = mu1 * (kappa^2 + |D|^2)^((p-2)/2), |D| the Frobenius norm.
inline double viscosity_coefficient(const ViscosityLaw& law, double d_norm_sq) {
  return law.mu1 * std::pow(law.kappa * law.kappa + d_norm_sq, 0.5 * (law.p - 2.0));
}

// gamma(G) = gamma1 * (kappa_t^2 + |G|^2)^((q-2)/2).
inline double diffusivity_coefficient(const DiffusionLaw& law, double g_norm_sq) {
  return law.gamma1 * std::pow(law.kappa_t * law.kappa_t + g_norm_sq, 0.5 * (law.q - 2.0));
}

template <int D>
SymTensor<D> viscous_stress(const ViscosityLaw& law, const SymTensor<D>& d) {
  return viscosity_coefficient(law, norm_sq(d)) * d;
}

// Rank-3 array (d x d x d reals), the natural argument of the diffusion law.
template <int D>
  requires ValidDim<D>
struct Rank3 {
  static constexpr int ncomp = D * D * D;
  std::array<double, ncomp> e{};

  double operator()(int k, int i, int j) const { return e[(k * D + i) * D + j]; }
  double& operator()(int k, int i, int j) { return e[(k * D + i) * D + j]; }
};

template <int D>
double norm_sq(const Rank3<D>& g) {
  double s = 0.0;
  for (double x : g.e) s += x * x;
  return s;
}

template <int D>
Rank3<D> diffusive_flux(const DiffusionLaw& law, const Rank3<D>& g) {
  const double c = diffusivity_coefficient(law, norm_sq(g));
  Rank3<D> f;
  for (int k = 0; k < Rank3<D>::ncomp; ++k) f.e[k] = c * g.e[k];
  return f;
}

// Explicit structural constants (Young-type estimates) under which the
// Carreau laws satisfy the assumed coercivity and growth bounds:
//   mu(D)|D|^2 >= c |D|^p - offset        with the coercivity pair,
//   |mu(D) D|  <= c |D|^(p-1) + offset    with the growth pair.
// For p <= 2:  c_coer = mu1 * 2^((p-2)/2), offset = c_coer * kappa^p,
//              c_grow = mu1, offset = 0.
// For p > 2:   c_coer = mu1, offset = 0,
//              c_grow = mu1 * 2^((p-2)/2) * (1 + kappa^(p-2)),
//              offset = mu1 * 2^((p-2)/2) * kappa^(p-2).
struct StructuralConstants {
  double coercivity_constant = 0.0;
  double coercivity_offset = 0.0;
  double growth_constant = 0.0;
  double growth_offset = 0.0;
};

StructuralConstants structural_constants(double amplitude, double shift, double exponent);

// Result of sampling-based verification of the law assumptions: p-coercivity,
// (p-1)-growth and monotonicity of the induced flux (strict for the viscosity,
// non-strict for the diffusion).  Pairs with identical arguments are skipped
// and counted separately.
struct AssumptionReport {
  std::string law;               // "viscosity" or "diffusion"
  double exponent = 0.0;         // p or q
  int samples = 0;               // tensors drawn
  int pairs_evaluated = 0;       // distinct monotonicity pairs
  int pairs_skipped = 0;         // identical pairs excluded
  int violations = 0;            // failed pointwise checks
  double min_monotonicity = 0.0; // min of (S1-S2):(A1-A2) over distinct pairs
  double coercivity_constant = 0.0;
  double coercivity_offset = 0.0;
  double growth_constant = 0.0;
  double growth_offset = 0.0;
  double max_growth_ratio = 0.0; // sup |flux| / (|A|^(e-1) + 1)
};

// Sampling: i.i.d. uniform [-10,10] entries, plus deterministic near-zero and
// near-axis corner cases (including one exactly repeated pair, which must be
// skipped).  Runs in 3D, the ambient dimension of the model.
AssumptionReport verify_viscosity(const ViscosityLaw& law, int samples, std::uint64_t seed);
AssumptionReport verify_diffusion(const DiffusionLaw& law, int samples, std::uint64_t seed);

// Flat `key = value` rendering used by the CLI report.
std::string format_report(const AssumptionReport& report);

}  // namespace oldreg
