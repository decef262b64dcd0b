#include "oldreg/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oldreg {

namespace {

// y = A x with A = -div grad, homogeneous Neumann (missing neighbours drop
// out, exactly matching a face gradient that is zero on the walls).
void apply_neg_laplacian(const std::vector<double>& x, std::vector<double>& y, int nx, int ny,
                         double ihx2, double ihy2) {
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      double s = 0.0;
      if (i > 0) s += (x[k] - x[k - 1]) * ihx2;
      if (i < nx - 1) s += (x[k] - x[k + 1]) * ihx2;
      if (j > 0) s += (x[k] - x[k - nx]) * ihy2;
      if (j < ny - 1) s += (x[k] - x[k + nx]) * ihy2;
      y[k] = s;
    }
  }
}

void remove_mean(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  const double mean = s / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

ProjectionResult project(const StaggeredVelocityField& u_star, const Grid& g, double tol,
                         int max_iter) {
  const int nx = g.nx, ny = g.ny;
  const int n = nx * ny;
  const double ihx2 = 1.0 / (g.hx * g.hx);
  const double ihy2 = 1.0 / (g.hy * g.hy);

  // rhs = -div u_star (so the system is A phi = rhs with A = -div grad);
  // removing the mean pins the compatibility/constant mode.
  std::vector<double> rhs(n);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      rhs[j * nx + i] = -((u_star.u(i + 1, j) - u_star.u(i, j)) / g.hx +
                          (u_star.v(i, j + 1) - u_star.v(i, j)) / g.hy);
  remove_mean(rhs);

  std::vector<double> phi(n, 0.0), r = rhs, p = rhs, ap(n);
  double rr = 0.0;
  for (double v : r) rr += v * v;

  ProjectionResult out;
  out.vel = u_star;

  // div(u_star - grad phi) = -(rhs - A phi) = -r, so the max-norm residual is
  // exactly the divergence we deliver.  Stop slightly below tol to leave room
  // for the rounding of the final subtraction.
  const double stop = 0.5 * tol;
  int it = 0;
  while (max_abs(r) > stop) {
    if (it >= max_iter)
      throw SolverError("projection: conjugate gradients exceeded " + std::to_string(max_iter) +
                        " iterations (residual " + std::to_string(max_abs(r)) + ")");
    apply_neg_laplacian(p, ap, nx, ny, ihx2, ihy2);
    double pap = 0.0;
    for (int k = 0; k < n; ++k) pap += p[k] * ap[k];
    if (!(pap > 0.0)) break;  // singular direction: residual is roundoff-level
    const double alpha = rr / pap;
    for (int k = 0; k < n; ++k) {
      phi[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    double rr_new = 0.0;
    for (double v : r) rr_new += v * v;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    ++it;
    if (it % 64 == 0) remove_mean(r);  // guard the constant mode against drift
  }
  out.iterations = it;

  remove_mean(phi);
  out.phi = Array2D(nx, ny, 0, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) out.phi(i, j) = phi[j * nx + i];

  // Subtract grad phi on interior faces only; wall faces stay pinned.
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      out.vel.u(i, j) -= (out.phi(i, j) - out.phi(i - 1, j)) / g.hx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out.vel.v(i, j) -= (out.phi(i, j) - out.phi(i, j - 1)) / g.hy;

  apply_velocity_boundary(out.vel, g);
  out.max_div = max_divergence(out.vel, g);
  return out;
}

}  // namespace oldreg
