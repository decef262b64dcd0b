#pragma once

#include <cstdint>
#include <vector>

#include "oldreg/scenario.hpp"
#include "oldreg/solver.hpp"

// Discrete parabolic (space-time) geometry: grid-aligned cylinder means,
// the associated maximal operators, superlevel-set measurements, and a
// clamp-based truncation surrogate with a measured parabolic Lipschitz
// constant.

namespace oldreg {

// Scalar samples on a uniform space-time grid, t-major storage.
struct SpaceTimeField {
  int nt = 0, nx = 0, ny = 0;
  double dt = 1.0, hx = 1.0, hy = 1.0;
  double t0 = 0.0, x0 = 0.0, y0 = 0.0;  // origin offsets (bookkeeping only)
  std::vector<double> a;

  SpaceTimeField() = default;
  SpaceTimeField(int nt_, int nx_, int ny_, double dt_, double hx_, double hy_)
      : nt(nt_), nx(nx_), ny(ny_), dt(dt_), hx(hx_), hy(hy_),
        a(static_cast<std::size_t>(nt_) * nx_ * ny_, 0.0) {}

  double operator()(int n, int i, int j) const { return a[idx(n, i, j)]; }
  double& operator()(int n, int i, int j) { return a[idx(n, i, j)]; }

  std::size_t idx(int n, int i, int j) const {
    return (static_cast<std::size_t>(n) * nx + i) * ny + j;
  }
  std::size_t size() const { return a.size(); }
  double cell_measure() const { return dt * hx * hy; }
};

// Two-component (velocity-like) space-time field with shared geometry.
struct VectorSpaceTimeField {
  SpaceTimeField x, y;
};

// Cylinder of the scaling geometry: time radius = alpha * (spatial radius)^2
// by construction.
struct ParabolicCylinder {
  double t = 0.0, x = 0.0, y = 0.0;  // center
  double r_b = 0.0;                  // spatial radius
  double alpha = 1.0;
  double r_i = 0.0;                  // temporal radius, = alpha * r_b^2

  ParabolicCylinder() = default;
  ParabolicCylinder(double t_, double x_, double y_, double r_b_, double alpha_)
      : t(t_), x(x_), y(y_), r_b(r_b_), alpha(alpha_), r_i(alpha_ * r_b_ * r_b_) {}
};

// Index radii of the dyadic cylinder family on a given field: {0, 1, 2, 4,
// ..., 2^L} with 2^L <= max(nx, ny).  Radius 0 is the singleton cylinder,
// so the maximal operator dominates |f| pointwise.
std::vector<int> cylinder_radii(const SpaceTimeField& f);

// Temporal index radius paired with spatial index radius rho:
// round(alpha * (rho * min(hx, hy))^2 / dt).
int temporal_index_radius(const SpaceTimeField& f, double alpha, int rho);

// Power-mean finish applied to a cylinder mean of |f|^s: identity for s = 1,
// sqrt for s = 2, pow(mean, 1/s) otherwise.  Exposed so independent
// reimplementations agree bitwise on exact inputs.
double power_mean_finish(double mean, double s);

// (M^alpha_s f)(P) = sup over family cylinders containing P of
// power_mean_finish(mean over the cylinder of |f|^s).  Cylinders are the
// dyadic grid-aligned boxes above, clipped to the domain; the singleton
// member contributes |f(P)| directly.
SpaceTimeField parabolic_maximal(const SpaceTimeField& f, double alpha, double s);

// dt*hx*hy * #{ g > lambda } (strict inequality).
double superlevel_measure(const SpaceTimeField& g, double lambda);

struct LevelSetReport {
  std::vector<double> lambda_values;
  std::vector<double> measures;        // superlevel measures of M^alpha_1 f
  std::vector<double> weak_constants;  // lambda^p * measure / ||f||_p^p
  double max_constant = 0.0;
};

// Weak-type scan: the measured constant sup_lambda lambda^p |{M f > lambda}|
// over ||f||_p^p across the supplied sweep.
LevelSetReport weak_bound_check(const SpaceTimeField& f, double p, double alpha,
                                const std::vector<double>& lambda_values);

struct TruncationResult {
  VectorSpaceTimeField field;     // equals the input off the bad set, exactly
  SpaceTimeField bad;             // indicator (1 on the bad set)
  double bad_measure = 0.0;       // dt*hx*hy * #bad
  double lipschitz_constant = 0.0;
};

// Lipschitz-truncation surrogate: compute the spatial gradient magnitude of
// u (forward differences, one-sided at the far edge, so every adjacent pair
// is covered by a sample), take its M^alpha_1 superlevel set above lambda as
// the bad set, zero u there, and run one neighbor-averaging pass on bad
// points only.  The output is bitwise equal to the input off the bad set.
// The reported constant is sup over adjacent grid pairs of |du| / dist with
// dist = hx, hy for spatial neighbors and sqrt(dt / alpha) for temporal
// neighbors (the parabolic metric).
TruncationResult clamp_truncate(const VectorSpaceTimeField& u, double lambda, double alpha);

// Scalar trajectory extracted from captured solver states, cell-centred;
// dt is the mean snapshot spacing (snapshots of an adaptive run are nearly
// uniform; the spacing enters only through cylinder aspect ratios).
SpaceTimeField capture_scalar(const std::vector<State>& snaps, const Grid& g, CaptureField which);

// Velocity trajectory (cell-centred components) for clamp_truncate.
VectorSpaceTimeField capture_velocity(const std::vector<State>& snaps, const Grid& g);

}  // namespace oldreg
